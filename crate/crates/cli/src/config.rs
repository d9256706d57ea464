//! Experiment specification read from TOML.
//!
//! Every field has a default, so a resolved specification can be echoed in
//! full into the output provenance.

use ddf_core::channel::LinkBudget;
use ddf_core::engine::{closed_loop_family, SearchRange};
use ddf_core::frame::FrameConfig;
use ddf_core::mi::{MiTables, SnrGrid};
use ddf_core::schemes::{PatchSlots, RelayOrder, Scheme};
use serde::{Deserialize, Serialize};

use crate::error::{spec_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    OutageContour,
    SeContour,
    DiversityReport,
    MiTableDump,
}

impl ExperimentKind {
    pub fn command(&self) -> &'static str {
        match self {
            ExperimentKind::OutageContour => "outage-contour",
            ExperimentKind::SeContour => "se-contour",
            ExperimentKind::DiversityReport => "diversity-report",
            ExperimentKind::MiTableDump => "mi-table",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSpec {
    pub experiment: ExperimentSection,
    pub frame: FrameSection,
    pub links: LinksSection,
    pub schemes: Vec<SchemeEntry>,
    pub search: SearchSection,
    pub outage: OutageSection,
    pub se: SeSection,
    pub mi_table: MiTableSection,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            experiment: ExperimentSection::default(),
            frame: FrameSection::default(),
            links: LinksSection::default(),
            schemes: vec![SchemeEntry::named("monostream")],
            search: SearchSection::default(),
            outage: OutageSection::default(),
            se: SeSection::default(),
            mi_table: MiTableSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    pub kind: Option<ExperimentKind>,
    pub seed: u64,
    pub trials: u64,
    /// Output file; standard output if absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            kind: None,
            seed: 1,
            trials: 100_000,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FramePreset {
    /// Seven sub-frames, `T_1 = K / m_s`, `T_i = T_1 / 3`.
    OpenLoop,
    /// Three sub-frames, `T_1 = 4 T_i`, `K = rate T_1 m_s`.
    ClosedLoop,
    /// Explicit `k` and `sub_frames`.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrameSection {
    pub preset: FramePreset,
    pub m_s: u32,
    /// Message size for the open-loop and custom layouts.
    pub k: u64,
    pub sub_frames: Vec<u64>,
    /// Closed loop: symbols per redundancy sub-frame.
    pub t_i: u64,
    /// Closed loop: first-sub-frame coding rate of a single frame.
    pub rate: f64,
    /// Closed loop: candidate rates for slow link adaptation.
    pub rates: Vec<f64>,
}

impl Default for FrameSection {
    fn default() -> Self {
        Self {
            preset: FramePreset::OpenLoop,
            m_s: 2,
            k: 240,
            sub_frames: Vec::new(),
            t_i: 10,
            rate: 0.5,
            rates: vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
        }
    }
}

impl FrameSection {
    pub fn frame(&self) -> Result<FrameConfig> {
        Ok(match self.preset {
            FramePreset::OpenLoop => FrameConfig::open_loop(self.k, self.m_s)?,
            FramePreset::ClosedLoop => FrameConfig::closed_loop(self.rate, self.t_i, self.m_s)?,
            FramePreset::Custom => FrameConfig::new(self.k, self.sub_frames.clone(), self.m_s)?,
        })
    }

    /// Frames for slow link adaptation, by ascending rate.
    pub fn family(&self) -> Result<Vec<(f64, FrameConfig)>> {
        if self.preset != FramePreset::ClosedLoop {
            return spec_err("slow link adaptation needs the closed_loop frame preset");
        }
        if self.rates.is_empty() {
            return spec_err("frame.rates is empty");
        }
        let mut rates = self.rates.clone();
        rates.sort_by(f64::total_cmp);
        Ok(closed_loop_family(&rates, self.t_i, self.m_s)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinksSection {
    pub n_rx: usize,
    pub snr_sr_db: f64,
}

impl Default for LinksSection {
    fn default() -> Self {
        Self {
            n_rx: 2,
            snr_sr_db: 10.0,
        }
    }
}

/// Integer or keyword value of `m_r` and `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntOrWord {
    Int(u64),
    Word(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alphabet {
    Qam,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_r: Option<IntOrWord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<IntOrWord>,
    #[serde(default = "default_alphabet")]
    pub alphabet: Alphabet,
}

fn default_alphabet() -> Alphabet {
    Alphabet::Qam
}

impl SchemeEntry {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            m_r: None,
            p: None,
            alphabet: Alphabet::Qam,
        }
    }

    fn fixed_mr(&self) -> Result<u32> {
        match &self.m_r {
            Some(IntOrWord::Int(v)) => Ok(*v as u32),
            _ => spec_err(format!("scheme {} needs an integer m_r", self.name)),
        }
    }

    pub fn scheme(&self) -> Result<Scheme> {
        let s = match self.name.as_str() {
            "direct" => Scheme::Direct,
            "monostream" => Scheme::Monostream,
            "monostream_adapted_mod" => Scheme::MonostreamAdaptedMod,
            "patched_monostream_mu" => Scheme::PatchedMonostreamMu,
            "patched_monostream" => match &self.p {
                Some(IntOrWord::Word(w)) if w == "auto_mu" => Scheme::PatchedMonostreamMu,
                None => Scheme::PatchedMonostream {
                    m_r: self.fixed_mr()?,
                    slots: PatchSlots::Full,
                },
                Some(IntOrWord::Word(w)) if w == "full" => Scheme::PatchedMonostream {
                    m_r: self.fixed_mr()?,
                    slots: PatchSlots::Full,
                },
                Some(IntOrWord::Int(p)) => Scheme::PatchedMonostream {
                    m_r: self.fixed_mr()?,
                    slots: PatchSlots::Count(*p),
                },
                Some(IntOrWord::Word(w)) => {
                    return spec_err(format!(
                        "p must be an integer, \"full\" or \"auto_mu\", got {w:?}"
                    ))
                }
            },
            "distributed_alamouti" => Scheme::DistributedAlamouti,
            "alamouti_adapted_mod" => Scheme::AlamoutiAdaptedMod,
            "patched_alamouti" => Scheme::PatchedAlamouti {
                m_r: match &self.m_r {
                    None => RelayOrder::Adaptive,
                    Some(IntOrWord::Word(w)) if w == "adaptive" => RelayOrder::Adaptive,
                    Some(IntOrWord::Int(v)) => RelayOrder::Fixed(*v as u32),
                    Some(IntOrWord::Word(w)) => {
                        return spec_err(format!(
                            "m_r must be an integer or \"adaptive\", got {w:?}"
                        ))
                    }
                },
            },
            "patched_golden" => Scheme::PatchedGolden {
                m_r: self.fixed_mr()?,
            },
            "patched_silver" => Scheme::PatchedSilver {
                m_r: self.fixed_mr()?,
            },
            other => return spec_err(format!("unknown scheme {other:?}")),
        };
        Ok(s)
    }

    /// Label used in output rows.
    pub fn label(&self) -> Result<String> {
        let mut label = match self.scheme()? {
            Scheme::PatchedMonostream { m_r, slots } => match slots {
                PatchSlots::Full => format!("patched_monostream(m_r={m_r},p=full)"),
                PatchSlots::Count(p) => format!("patched_monostream(m_r={m_r},p={p})"),
            },
            Scheme::PatchedAlamouti { m_r } => match m_r {
                RelayOrder::Fixed(m) => format!("patched_alamouti(m_r={m})"),
                RelayOrder::Adaptive => "patched_alamouti(m_r=adaptive)".to_string(),
            },
            Scheme::PatchedGolden { m_r } => format!("patched_golden(m_r={m_r})"),
            Scheme::PatchedSilver { m_r } => format!("patched_silver(m_r={m_r})"),
            s => s.name().to_string(),
        };
        if self.alphabet == Alphabet::Gaussian {
            label.push_str("[gaussian]");
        }
        Ok(label)
    }

    pub fn tables(&self) -> &'static MiTables {
        static GAUSSIAN: MiTables = MiTables::Gaussian;
        match self.alphabet {
            Alphabet::Qam => MiTables::standard(),
            Alphabet::Gaussian => &GAUSSIAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchSection {
    pub lo_db: f64,
    pub hi_db: f64,
    pub tol_db: f64,
}

impl Default for SearchSection {
    fn default() -> Self {
        let r = SearchRange::default();
        Self {
            lo_db: r.lo_db,
            hi_db: r.hi_db,
            tol_db: r.tol_db,
        }
    }
}

impl SearchSection {
    pub fn range(&self) -> SearchRange {
        SearchRange {
            lo_db: self.lo_db,
            hi_db: self.hi_db,
            tol_db: self.tol_db,
        }
    }
}

/// SNR varied by the outage contour search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourAxis {
    /// `SNR_RD` at each `SNR_SD` of the grid.
    Rd,
    /// `SNR_SD = SNR_RD`, one row per conditioning.
    Common,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutageSection {
    pub target: f64,
    pub axis: ContourAxis,
    pub snr_sd_db: Vec<f64>,
    /// Sub-frame after which the relay decodes (it transmits from the next
    /// one), `"none"` for a relay that never transmits, or `"marginal"` for
    /// decoding drawn from the source-relay link.
    pub relay_decode: Vec<IntOrWord>,
}

impl Default for OutageSection {
    fn default() -> Self {
        Self {
            target: 1e-2,
            axis: ContourAxis::Rd,
            snr_sd_db: Vec::new(),
            relay_decode: vec![IntOrWord::Word("marginal".into())],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeSection {
    pub target: f64,
    pub snr_sd_db: Vec<f64>,
}

impl Default for SeSection {
    fn default() -> Self {
        Self {
            target: 1.1,
            snr_sd_db: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MiTableSection {
    pub orders: Vec<u32>,
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for MiTableSection {
    fn default() -> Self {
        let g = SnrGrid::default();
        Self {
            orders: vec![2, 4, 6],
            start_db: g.start_db,
            stop_db: g.stop_db,
            step_db: g.step_db,
        }
    }
}

impl MiTableSection {
    pub fn grid(&self) -> SnrGrid {
        SnrGrid {
            start_db: self.start_db,
            stop_db: self.stop_db,
            step_db: self.step_db,
        }
    }
}

/// Relay conditioning of an outage contour row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// Relay decodes after this sub-frame.
    DecodedAfter(usize),
    /// Relay never transmits.
    Never,
    /// Decoding instant drawn per trial.
    Marginal,
}

impl Conditioning {
    pub fn label(&self) -> String {
        match self {
            Conditioning::DecodedAfter(d) => d.to_string(),
            Conditioning::Never => "none".into(),
            Conditioning::Marginal => "marginal".into(),
        }
    }
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn kind(&self) -> Option<ExperimentKind> {
        self.experiment.kind
    }

    /// Budget template with `SNR_SD = SNR_RD = 0 dB`.
    pub fn base_budget(&self) -> Result<LinkBudget> {
        Ok(LinkBudget::new(
            0.0,
            0.0,
            self.links.snr_sr_db,
            self.links.n_rx,
        )?)
    }

    pub fn conditionings(&self, frame: &FrameConfig) -> Result<Vec<Conditioning>> {
        self.outage
            .relay_decode
            .iter()
            .map(|v| match v {
                IntOrWord::Word(w) if w == "marginal" => Ok(Conditioning::Marginal),
                IntOrWord::Word(w) if w == "none" => Ok(Conditioning::Never),
                IntOrWord::Int(d) => {
                    let d = *d as usize;
                    if d == 0 || d > frame.n_max() {
                        spec_err(format!("relay_decode {d} outside 1..={}", frame.n_max()))
                    } else if d == frame.n_max() {
                        Ok(Conditioning::Never)
                    } else {
                        Ok(Conditioning::DecodedAfter(d))
                    }
                }
                IntOrWord::Word(w) => spec_err(format!(
                    "relay_decode entries are sub-frame indices, \"none\" or \"marginal\", got {w:?}"
                )),
            })
            .collect()
    }

    /// Checks everything the given experiment needs.
    pub fn validate(&self, kind: ExperimentKind) -> Result<()> {
        if let Some(k) = self.experiment.kind {
            if k != kind {
                return spec_err(format!(
                    "config describes a {} experiment, not {}",
                    k.command(),
                    kind.command()
                ));
            }
        }
        let needs_schemes = kind != ExperimentKind::MiTableDump;
        if needs_schemes {
            if self.schemes.is_empty() {
                return spec_err("no scheme given");
            }
            for s in &self.schemes {
                s.scheme()?.validate(self.frame.m_s)?;
            }
        }
        match kind {
            ExperimentKind::OutageContour => {
                let frame = self.frame.frame()?;
                self.conditionings(&frame)?;
                if !(self.outage.target > 0.0 && self.outage.target <= 1.0) {
                    return spec_err(format!(
                        "outage target {} outside (0, 1]",
                        self.outage.target
                    ));
                }
                if self.outage.axis == ContourAxis::Rd && self.outage.snr_sd_db.is_empty() {
                    return spec_err("outage.snr_sd_db grid is empty");
                }
                self.base_budget()?;
                self.check_trials()?;
            }
            ExperimentKind::SeContour => {
                self.frame.family()?;
                if self.se.target.is_nan() || self.se.target <= 0.0 {
                    return spec_err(format!("SE target {} must be positive", self.se.target));
                }
                if self.se.snr_sd_db.is_empty() {
                    return spec_err("se.snr_sd_db grid is empty");
                }
                self.base_budget()?;
                self.check_trials()?;
            }
            ExperimentKind::DiversityReport => {
                self.frame.frame()?;
            }
            ExperimentKind::MiTableDump => {
                self.mi_table.grid().validate()?;
                if self.mi_table.orders.is_empty() {
                    return spec_err("mi_table.orders is empty");
                }
            }
        }
        Ok(())
    }

    fn check_trials(&self) -> Result<()> {
        if self.experiment.trials < ddf_core::engine::MIN_TRIALS {
            return spec_err(format!(
                "at least {} trials are needed, got {}",
                ddf_core::engine::MIN_TRIALS,
                self.experiment.trials
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_outage_config() {
        let spec = ExperimentSpec::from_toml(
            r#"
            [experiment]
            kind = "outage_contour"
            trials = 2000

            [[schemes]]
            name = "patched_monostream"
            m_r = 4
            p = "auto_mu"

            [outage]
            snr_sd_db = [-10.0, 0.0]
            relay_decode = [4, 5, 7, "marginal"]
            "#,
        )
        .unwrap();
        spec.validate(ExperimentKind::OutageContour).unwrap();
        assert_eq!(
            spec.schemes[0].scheme().unwrap(),
            Scheme::PatchedMonostreamMu
        );
        let f = spec.frame.frame().unwrap();
        assert_eq!(
            spec.conditionings(&f).unwrap(),
            vec![
                Conditioning::DecodedAfter(4),
                Conditioning::DecodedAfter(5),
                Conditioning::Never,
                Conditioning::Marginal
            ]
        );
    }

    #[test]
    fn rejects_unknown_keys_and_schemes() {
        assert!(ExperimentSpec::from_toml("[experiment]\nseeds = 3").is_err());
        let spec = ExperimentSpec::from_toml("[[schemes]]\nname = \"relay_magic\"").unwrap();
        assert!(spec.validate(ExperimentKind::DiversityReport).is_err());
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let spec = ExperimentSpec::from_toml("[experiment]\nkind = \"mi_table_dump\"").unwrap();
        assert!(spec.validate(ExperimentKind::SeContour).is_err());
        assert!(spec.validate(ExperimentKind::MiTableDump).is_ok());
    }

    #[test]
    fn scheme_labels() {
        let e = SchemeEntry {
            name: "patched_monostream".into(),
            m_r: Some(IntOrWord::Int(6)),
            p: Some(IntOrWord::Int(12)),
            alphabet: Alphabet::Qam,
        };
        assert_eq!(e.label().unwrap(), "patched_monostream(m_r=6,p=12)");
        let mut g = SchemeEntry::named("monostream");
        g.alphabet = Alphabet::Gaussian;
        assert_eq!(g.label().unwrap(), "monostream[gaussian]");
    }
}
