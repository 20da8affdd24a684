use serde::{Deserialize, Serialize};

use crate::bcjr::{bcjr_app, SyndromeTrellis};
use crate::channel::LlrFrame;
use crate::code::CodeSpec;
use crate::error::{invalid, Result};
use crate::scl::SclDecoder;
use crate::soft_output::{
    bitwise_app_listmax, bitwise_app_listsum, bitwise_app_soscl, extrinsic, CodewordList,
};

/// Component soft-in soft-out decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SisoKind {
    SoScl { list_size: usize },
    ListMax { list_size: usize },
    ListSum { list_size: usize },
    Bcjr,
}

impl SisoKind {
    pub fn list_size(&self) -> Option<usize> {
        match *self {
            SisoKind::SoScl { list_size }
            | SisoKind::ListMax { list_size }
            | SisoKind::ListSum { list_size } => Some(list_size),
            SisoKind::Bcjr => None,
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            SisoKind::SoScl { .. } => "so_scl",
            SisoKind::ListMax { .. } => "list_max",
            SisoKind::ListSum { .. } => "list_sum",
            SisoKind::Bcjr => "bcjr",
        }
    }

    /// True for the list baselines that need a saturation value.
    pub fn needs_saturation(&self) -> bool {
        matches!(self, SisoKind::ListMax { .. } | SisoKind::ListSum { .. })
    }
}

/// Output of one component decode.
#[derive(Clone, Debug, PartialEq)]
pub struct SisoOutput {
    pub llr_app: Vec<f64>,
    pub llr_ext: Vec<f64>,
}

/// A component decoder with its reusable workspace.
#[derive(Clone, Debug)]
pub struct ComponentSiso {
    kind: SisoKind,
    scl: Option<SclDecoder>,
    trellis: Option<SyndromeTrellis>,
}

impl ComponentSiso {
    pub fn new(spec: &CodeSpec, kind: SisoKind) -> Result<Self> {
        let (scl, trellis) = match kind {
            SisoKind::Bcjr => (None, Some(SyndromeTrellis::from_spec(spec)?)),
            _ => {
                let l = kind.list_size().unwrap_or(1);
                if l == 0 {
                    return invalid("list size must be at least 1");
                }
                (Some(SclDecoder::new(spec, l)?), None)
            }
        };
        Ok(Self { kind, scl, trellis })
    }

    pub fn kind(&self) -> SisoKind {
        self.kind
    }

    /// Decodes one frame; `beta` is the saturation of the list baselines.
    pub fn decode(&mut self, frame: &LlrFrame, beta: f64) -> Result<SisoOutput> {
        let llr_app = match (self.kind, &mut self.scl, &self.trellis) {
            (SisoKind::Bcjr, _, Some(t)) => bcjr_app(t, frame)?,
            (kind, Some(dec), _) => {
                let res = dec.decode(frame)?;
                match kind {
                    SisoKind::SoScl { .. } => bitwise_app_soscl(&res, frame)?,
                    SisoKind::ListMax { .. } => {
                        bitwise_app_listmax(&CodewordList::from_result(&res), frame, beta)?
                    }
                    _ => bitwise_app_listsum(&CodewordList::from_result(&res), frame, beta)?,
                }
            }
            _ => unreachable!("workspace matches kind"),
        };
        let llr_ext = extrinsic(&llr_app, frame);
        Ok(SisoOutput { llr_app, llr_ext })
    }
}
