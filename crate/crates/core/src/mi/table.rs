//! Tabulated mutual-information curves and their lookup.

use std::io::{Read, Write};
use std::sync::OnceLock;

use super::{gaussian_mi, mi_quadrature, Constellation, GaussHermite, DEFAULT_QUADRATURE_ORDER};
use crate::channel::db_to_linear;
use crate::{error::param, Error, Result};

/// Uniform SNR grid in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for SnrGrid {
    fn default() -> Self {
        Self {
            start_db: -20.0,
            stop_db: 40.0,
            step_db: 0.25,
        }
    }
}

impl SnrGrid {
    /// Tables must span at least [-20, 40] dB with a step of at most 0.25 dB.
    pub fn validate(&self) -> Result<()> {
        let SnrGrid {
            start_db,
            stop_db,
            step_db,
        } = *self;
        if !(start_db.is_finite() && stop_db.is_finite() && step_db.is_finite()) {
            return param("SNR grid bounds must be finite");
        }
        if !(step_db > 0.0 && step_db <= 0.25) {
            return param(format!(
                "SNR grid step must be in (0, 0.25] dB, got {step_db}"
            ));
        }
        if start_db > -20.0 || stop_db < 40.0 {
            return param(format!(
                "SNR grid [{start_db}, {stop_db}] dB must cover [-20, 40] dB"
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|j| self.start_db + j as f64 * self.step_db)
            .collect()
    }
}

/// Mutual information of one constellation sampled on a uniform dB grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MiTable {
    constellation: Constellation,
    start_db: f64,
    step_db: f64,
    snr_grid_db: Vec<f64>,
    mi_bits: Vec<f64>,
}

impl MiTable {
    /// Tabulates with order-16 Gauss-Hermite quadrature.
    pub fn build(constellation: &Constellation, grid: &SnrGrid) -> Result<Self> {
        grid.validate()?;
        let rule = GaussHermite::new(DEFAULT_QUADRATURE_ORDER)?;
        let snr_grid_db = grid.points();
        let raw = snr_grid_db
            .iter()
            .map(|&db| mi_quadrature(constellation, db_to_linear(db), &rule))
            .collect();
        Ok(Self::from_parts(
            constellation,
            grid.start_db,
            grid.step_db,
            snr_grid_db,
            raw,
        ))
    }

    /// Enforces the table invariants on raw values: a running maximum removes
    /// round-off dips near saturation, then the entropy and Gaussian-input
    /// caps are applied.
    fn from_parts(
        constellation: &Constellation,
        start_db: f64,
        step_db: f64,
        snr_grid_db: Vec<f64>,
        raw: Vec<f64>,
    ) -> Self {
        let m = constellation.order_bits() as f64;
        let mut best = 0.0f64;
        let mi_bits = raw
            .into_iter()
            .zip(&snr_grid_db)
            .map(|(v, &db)| {
                best = best.max(v);
                best.min(m).min(gaussian_mi(db_to_linear(db)))
            })
            .collect();
        Self {
            constellation: constellation.clone(),
            start_db,
            step_db,
            snr_grid_db,
            mi_bits,
        }
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn order_bits(&self) -> u32 {
        self.constellation.order_bits()
    }

    pub fn snr_grid_db(&self) -> &[f64] {
        &self.snr_grid_db
    }

    pub fn mi_bits(&self) -> &[f64] {
        &self.mi_bits
    }

    /// Linear interpolation in dB. Below the grid the lowest entry is scaled
    /// linearly with SNR toward zero; above it the top entry is held.
    pub fn lookup(&self, snr_linear: f64) -> f64 {
        if snr_linear.is_nan() || snr_linear <= 0.0 {
            return 0.0;
        }
        let last = self.mi_bits.len() - 1;
        let db = 10.0 * snr_linear.log10();
        let pos = (db - self.start_db) / self.step_db;
        if pos <= 0.0 {
            return self.mi_bits[0] * snr_linear / db_to_linear(self.start_db);
        }
        if pos >= last as f64 {
            return self.mi_bits[last];
        }
        let j = pos.floor() as usize;
        let frac = pos - j as f64;
        self.mi_bits[j] + frac * (self.mi_bits[j + 1] - self.mi_bits[j])
    }

    /// Writes `snr_db,mi_bits` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["snr_db", "mi_bits"])?;
        for (db, mi) in self.snr_grid_db.iter().zip(&self.mi_bits) {
            w.write_record([format!("{db}"), format!("{mi:.17e}")])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// Reads a table written by [`MiTable::write_csv`]. The grid must be
    /// uniform and satisfy the same coverage rules as [`SnrGrid`].
    pub fn read_csv<R: Read>(constellation: &Constellation, reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut dbs = Vec::new();
        let mut mis = Vec::new();
        for row in r.deserialize::<(f64, f64)>() {
            let (db, mi) = row?;
            dbs.push(db);
            mis.push(mi);
        }
        if dbs.len() < 2 {
            return Err(Error::Config("MI table needs at least two rows".into()));
        }
        let step = dbs[1] - dbs[0];
        let uniform = dbs.windows(2).all(|w| ((w[1] - w[0]) - step).abs() < 1e-9);
        if !uniform {
            return Err(Error::Config("MI table grid is not uniform".into()));
        }
        let grid = SnrGrid {
            start_db: dbs[0],
            stop_db: dbs[dbs.len() - 1],
            step_db: step,
        };
        grid.validate()?;
        Ok(Self::from_parts(constellation, dbs[0], step, dbs, mis))
    }
}

/// Mutual-information source used by the engine, keyed by constellation
/// order.
#[derive(Debug, Clone)]
pub enum MiTables {
    /// Square QAM tables.
    Qam(Vec<MiTable>),
    /// Gaussian input alphabet: every order maps to `log2(1 + snr)`.
    Gaussian,
}

impl MiTables {
    /// Builds QAM tables for every order in `orders`.
    pub fn build(orders: &[u32], grid: &SnrGrid) -> Result<Self> {
        let mut tables = Vec::with_capacity(orders.len());
        for &m in orders {
            if tables.iter().any(|t: &MiTable| t.order_bits() == m) {
                continue;
            }
            tables.push(MiTable::build(&Constellation::qam(m)?, grid)?);
        }
        Ok(MiTables::Qam(tables))
    }

    /// QPSK, 16-QAM and 64-QAM on the default grid, built once per process.
    pub fn standard() -> &'static MiTables {
        static TABLES: OnceLock<MiTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            MiTables::build(&[2, 4, 6], &SnrGrid::default()).expect("default grid is valid")
        })
    }

    pub fn table(&self, order_bits: u32) -> Option<&MiTable> {
        match self {
            MiTables::Qam(tables) => tables.iter().find(|t| t.order_bits() == order_bits),
            MiTables::Gaussian => None,
        }
    }

    /// Mutual information per symbol of the given order at a linear SNR.
    pub fn lookup(&self, order_bits: u32, snr_linear: f64) -> Result<f64> {
        match self {
            MiTables::Gaussian => Ok(gaussian_mi(snr_linear)),
            MiTables::Qam(_) => self
                .table(order_bits)
                .map(|t| t.lookup(snr_linear))
                .ok_or_else(|| {
                    Error::Config(format!("no MI table for {order_bits} bits per symbol"))
                }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpsk_table() -> &'static MiTable {
        MiTables::standard().table(2).unwrap()
    }

    #[test]
    fn default_grid_has_241_points() {
        assert_eq!(SnrGrid::default().len(), 241);
        assert_eq!(qpsk_table().mi_bits().len(), 241);
    }

    #[test]
    fn grid_validation() {
        let bad_step = SnrGrid {
            step_db: 0.5,
            ..SnrGrid::default()
        };
        let short = SnrGrid {
            stop_db: 30.0,
            ..SnrGrid::default()
        };
        assert!(matches!(bad_step.validate(), Err(Error::Parameter(_))));
        assert!(matches!(short.validate(), Err(Error::Parameter(_))));
        assert!(MiTable::build(&Constellation::qpsk(), &short).is_err());
    }

    #[test]
    fn lookup_identities() {
        let t = qpsk_table();
        assert_eq!(t.lookup(0.0), 0.0);
        for j in [0, 17, 120, 240] {
            let db = t.snr_grid_db()[j];
            assert!((t.lookup(db_to_linear(db)) - t.mi_bits()[j]).abs() < 1e-12);
        }
        assert_eq!(t.lookup(1e9), t.mi_bits()[240]);
        let below = t.lookup(db_to_linear(-30.0));
        assert!(below > 0.0 && below < t.mi_bits()[0]);
    }

    #[test]
    fn csv_round_trip() {
        let t = qpsk_table();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = MiTable::read_csv(&Constellation::qpsk(), buf.as_slice()).unwrap();
        assert_eq!(back.snr_grid_db().len(), t.snr_grid_db().len());
        for (a, b) in back.mi_bits().iter().zip(t.mi_bits()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn missing_order_is_a_config_error() {
        let tables = MiTables::build(&[2], &SnrGrid::default()).unwrap();
        assert!(matches!(tables.lookup(4, 1.0), Err(Error::Config(_))));
        assert_eq!(MiTables::Gaussian.lookup(4, 3.0).unwrap(), 2.0);
    }
}
