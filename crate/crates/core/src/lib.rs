//! Soft-output successive-cancellation list decoding of polar-like codes.

pub mod bcjr;
pub mod channel;
pub mod code;
pub mod concatenated;
pub mod error;
pub mod evaluation;
pub mod gf2;
pub mod harness;
pub mod logmath;
pub mod scl;
pub mod soft_output;

pub use channel::{transmit, trial_rng, ChannelParams, LlrFrame};
pub use code::{encode, systematic_encode, CodeSpec, CrcSpec, FrozenRule, InfoSetKind};
pub use error::{Error, Result};
pub use scl::{scl_decode, DecodeResult, SclDecoder};
