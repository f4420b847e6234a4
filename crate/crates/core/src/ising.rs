//! Exact diagonalization of the periodic Ising chain
//! `H = −J Σ σᶻₙσᶻₙ₊₁ − h_z Σ σᶻₙ − h_x Σ σˣₙ`
//! in momentum sectors of the cyclic shift `T`.
//!
//! Basis states are bitstrings with site 1 as the most significant bit;
//! bit 0 is spin up (`σᶻ = +1`). `T(v₁ ⊗ v₂ ⊗ … ⊗ v_N) = v₂ ⊗ … ⊗ v_N ⊗ v₁`
//! is a left rotation of the bitstring. Momentum `p = 2πk/N` labels the
//! `T`-eigenvalue `e^{ip}`, with `k` in `(−N/2, N/2]`.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::C64;

pub const MAX_SITES: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub n: usize,
    pub j: f64,
    pub hz: f64,
    pub hx: f64,
}

impl IsingParams {
    pub fn new(n: usize, j: f64, hz: f64, hx: f64) -> Result<Self> {
        let p = IsingParams { n, j, hz, hx };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_SITES).contains(&self.n) {
            return Err(Error::Domain(format!("N = {} outside 2..={MAX_SITES}", self.n)));
        }
        if !(self.j > 0.0 && self.j.is_finite()) {
            return Err(Error::Domain(format!("J must be positive, got {}", self.j)));
        }
        for (name, v) in [("h_z", self.hz), ("h_x", self.hx)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be nonnegative, got {v}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }
}

fn spin(state: usize, site: usize, n: usize) -> i64 {
    if (state >> (n - 1 - site)) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Integer bond and magnetization sums `(Σ sₙsₙ₊₁, Σ sₙ)` of a bitstring.
pub fn classical_counts(state: usize, n: usize) -> (i64, i64) {
    let mut bonds = 0;
    let mut mag = 0;
    for site in 0..n {
        let s = spin(state, site, n);
        bonds += s * spin(state, (site + 1) % n, n);
        mag += s;
    }
    (bonds, mag)
}

/// `T` as a permutation of basis indices: `T|s⟩ = |rotate_left(s)⟩`.
pub fn translate(state: usize, n: usize) -> usize {
    let mask = (1 << n) - 1;
    ((state << 1) | (state >> (n - 1))) & mask
}

pub fn translation_permutation(n: usize) -> Vec<usize> {
    (0..1usize << n).map(|s| translate(s, n)).collect()
}

/// `H` in the σᶻ product basis: the diagonal plus a uniform `−h_x` on every
/// single spin flip.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    pub params: IsingParams,
    pub diagonal: Vec<f64>,
}

/// Diagonal energies are computed from integer counts, so states related by
/// `T` get bit-identical energies.
pub fn build_hamiltonian(params: IsingParams) -> Result<Hamiltonian> {
    params.validate()?;
    let n = params.n;
    let diagonal = (0..params.dim())
        .map(|s| {
            let (bonds, mag) = classical_counts(s, n);
            -params.j * bonds as f64 - params.hz * mag as f64
        })
        .collect();
    Ok(Hamiltonian { params, diagonal })
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn entry(&self, a: usize, b: usize) -> f64 {
        if a == b {
            self.diagonal[a]
        } else if (a ^ b).count_ones() == 1 {
            -self.params.hx
        } else {
            0.0
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.params.n;
        (0..self.dim())
            .map(|s| {
                let flips: C64 = (0..n).map(|b| v[s ^ (1 << b)]).sum();
                v[s] * self.diagonal[s] - flips * self.params.hx
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |a, b| self.entry(a, b))
    }

    /// `max |(TH − HT)_{ab}|`, using `(TH)_{ab} = H_{T⁻¹a, b}` and
    /// `(HT)_{ab} = H_{a, Tb}`.
    pub fn commutator_max(&self) -> f64 {
        let n = self.params.n;
        let dim = self.dim();
        let mut inv = vec![0; dim];
        for s in 0..dim {
            inv[translate(s, n)] = s;
        }
        let mut dev: f64 = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                dev = dev.max((self.entry(inv[a], b) - self.entry(a, translate(b, n))).abs());
            }
        }
        dev
    }

    /// `max |H_{ab} − H_{ba}|`.
    pub fn asymmetry(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for a in 0..self.dim() {
            for b in 0..a {
                dev = dev.max((self.entry(a, b) - self.entry(b, a)).abs());
            }
        }
        dev
    }
}

/// Energies `−J Σ sₙsₙ₊₁ − h_z Σ sₙ` of every bitstring, accumulated site by
/// site in floating point.
pub fn classical_energies(params: IsingParams) -> Result<Vec<f64>> {
    params.validate()?;
    let n = params.n;
    Ok((0..params.dim())
        .map(|s| {
            let mut e = 0.0;
            for site in 0..n {
                let a = spin(s, site, n) as f64;
                let b = spin(s, (site + 1) % n, n) as f64;
                e -= params.j * a * b;
                e -= params.hz * a;
            }
            e
        })
        .collect())
}

/// A translation orbit: smallest member and period.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Orbit {
    rep: usize,
    period: usize,
}

/// For every state, its orbit index and the shift `l` with `s = Tˡ rep`.
struct OrbitTable {
    orbits: Vec<Orbit>,
    orbit_of: Vec<usize>,
    shift_of: Vec<usize>,
}

fn orbit_table(n: usize) -> OrbitTable {
    let dim = 1usize << n;
    let mut orbit_of = vec![usize::MAX; dim];
    let mut shift_of = vec![0; dim];
    let mut orbits = Vec::new();
    for s in 0..dim {
        if orbit_of[s] != usize::MAX {
            continue;
        }
        let idx = orbits.len();
        let mut t = s;
        let mut l = 0;
        loop {
            orbit_of[t] = idx;
            shift_of[t] = l;
            t = translate(t, n);
            l += 1;
            if t == s {
                break;
            }
        }
        orbits.push(Orbit { rep: s, period: l });
    }
    OrbitTable { orbits, orbit_of, shift_of }
}

/// Momentum label in `(−N/2, N/2]`.
pub fn momentum_k(k: usize, n: usize) -> i64 {
    let k = k as i64;
    let n = n as i64;
    if 2 * k > n {
        k - n
    } else {
        k
    }
}

pub fn momentum(k: i64, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Hermitian block of `H` in the momentum-`k` sector, in the basis
/// `|r, k⟩ ∝ Σ_m e^{−ipm} Tᵐ|r⟩` over orbit representatives `r` with
/// `e^{ip·period} = 1`. Returns the block and the representatives used.
fn sector_block(h: &Hamiltonian, table: &OrbitTable, k: usize) -> (DMatrix<C64>, Vec<usize>) {
    let n = h.params.n;
    let p = 2.0 * PI * k as f64 / n as f64;
    let members: Vec<usize> = table
        .orbits
        .iter()
        .enumerate()
        .filter(|(_, o)| (k * o.period) % n == 0)
        .map(|(i, _)| i)
        .collect();
    let mut pos = vec![usize::MAX; table.orbits.len()];
    for (i, &o) in members.iter().enumerate() {
        pos[o] = i;
    }
    let d = members.len();
    let mut block = DMatrix::<C64>::zeros(d, d);
    for (col, &oi) in members.iter().enumerate() {
        let a = table.orbits[oi];
        block[(col, col)] += C64::new(h.diagonal[a.rep], 0.0);
        if h.params.hx == 0.0 {
            continue;
        }
        for bit in 0..n {
            let s = a.rep ^ (1 << bit);
            let ro = table.orbit_of[s];
            let row = pos[ro];
            if row == usize::MAX {
                continue;
            }
            let r = table.orbits[ro];
            let l = table.shift_of[s] as f64;
            let amp = C64::from_polar(1.0, p * l) * (-h.params.hx * (a.period as f64 / r.period as f64).sqrt());
            block[(row, col)] += amp;
        }
    }
    (block, members)
}

fn is_diagonal(m: &DMatrix<C64>) -> bool {
    m.iter().enumerate().all(|(idx, z)| {
        let (i, j) = (idx % m.nrows(), idx / m.nrows());
        i == j || *z == C64::new(0.0, 0.0)
    })
}

/// One level of the momentum-resolved spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumLevel {
    pub k: i64,
    pub p: f64,
    pub energy: f64,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumSpectrum {
    pub params: IsingParams,
    pub ground_energy: f64,
    pub ground_k: i64,
    /// Sorted by `(k, epsilon)`.
    pub levels: Vec<MomentumLevel>,
    /// Largest `‖Hv − Ev‖∞` and `‖Tv − e^{ip}v‖∞` over all eigenvectors,
    /// when requested.
    pub residuals: Option<(f64, f64)>,
}

/// Diagonalizes `H` sector by sector. With `check_residuals` every
/// eigenvector is lifted to the full space and both residuals are measured.
pub fn momentum_spectrum(params: IsingParams, check_residuals: bool) -> Result<MomentumSpectrum> {
    let h = build_hamiltonian(params)?;
    let n = params.n;
    let table = orbit_table(n);
    let mut raw = Vec::with_capacity(h.dim());
    let mut worst = (0.0_f64, 0.0_f64);
    for k in 0..n {
        let (block, members) = sector_block(&h, &table, k);
        let kk = momentum_k(k, n);
        let (values, vectors): (Vec<f64>, Option<DMatrix<C64>>) = if is_diagonal(&block) {
            let vals = (0..block.nrows()).map(|i| block[(i, i)].re).collect();
            let vecs = check_residuals.then(|| DMatrix::<C64>::identity(block.nrows(), block.nrows()));
            (vals, vecs)
        } else {
            let eig = SymmetricEigen::try_new(block, f64::EPSILON, 0)
                .ok_or_else(|| Error::NoConvergence(format!("sector k = {kk}")))?;
            (eig.eigenvalues.iter().copied().collect(), Some(eig.eigenvectors))
        };
        if check_residuals {
            let vecs = vectors.expect("eigenvectors kept for residuals");
            let pk = 2.0 * PI * k as f64 / n as f64;
            let mu = C64::from_polar(1.0, pk);
            for (c, &e) in values.iter().enumerate() {
                let mut full = vec![C64::new(0.0, 0.0); h.dim()];
                for (row, &oi) in members.iter().enumerate() {
                    let o = table.orbits[oi];
                    let coeff = vecs[(row, c)] / (o.period as f64).sqrt();
                    let mut s = o.rep;
                    for m in 0..o.period {
                        full[s] += coeff * C64::from_polar(1.0, -pk * m as f64);
                        s = translate(s, n);
                    }
                }
                let hv = h.apply(&full);
                let rh = hv.iter().zip(&full).fold(0.0_f64, |a, (x, y)| a.max((x - y * e).norm()));
                let mut tv = vec![C64::new(0.0, 0.0); h.dim()];
                for (s, z) in full.iter().enumerate() {
                    tv[translate(s, n)] = *z;
                }
                let rt = tv.iter().zip(&full).fold(0.0_f64, |a, (x, y)| a.max((x - y * mu).norm()));
                worst = (worst.0.max(rh), worst.1.max(rt));
            }
        }
        raw.extend(values.into_iter().map(|e| (kk, e)));
    }
    let (ground_k, ground_energy) = raw
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.abs().cmp(&b.0.abs())))
        .expect("nonempty spectrum");
    let mut levels: Vec<MomentumLevel> = raw
        .into_iter()
        .map(|(k, e)| MomentumLevel { k, p: momentum(k, n), energy: e, epsilon: (e - ground_energy).max(0.0) })
        .collect();
    levels.sort_by(|a, b| a.k.cmp(&b.k).then(a.epsilon.total_cmp(&b.epsilon)));
    Ok(MomentumSpectrum {
        params,
        ground_energy,
        ground_k,
        levels,
        residuals: check_residuals.then_some(worst),
    })
}

/// Single-particle energy on the transverse-field line `h_z = 0`:
/// `2√(J² + h_x² − 2J h_x cos p)`.
pub fn free_fermion_energy(j: f64, hx: f64, p: f64) -> f64 {
    2.0 * (j * j + hx * hx - 2.0 * j * hx * p.cos()).sqrt()
}

/// Critical transverse field of the `h_z = 0` chain: the gap
/// `2|J − h_x|` closes at `h_x = J`.
pub fn critical_field(j: f64) -> f64 {
    j
}

/// Fit of one band to `ε² = m² + c·(2 sin(p/2))²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandFit {
    pub band: usize,
    pub mass: f64,
    pub c: f64,
    pub rms_residual: f64,
    pub points: Vec<(f64, f64)>,
}

/// Exploratory quasiparticle fit. Band `i` at momentum `p` is the `i`-th
/// lowest level of that sector above the ground state, by energy order;
/// crossings are not resolved.
pub fn dispersion_probe(spec: &MomentumSpectrum, band_count: usize) -> Result<Vec<BandFit>> {
    let n = spec.params.n;
    let mut fits = Vec::with_capacity(band_count);
    for band in 0..band_count {
        let mut points = Vec::new();
        for k in (0..n).map(|k| momentum_k(k, n)) {
            let skip = usize::from(k == spec.ground_k);
            let mut sector: Vec<&MomentumLevel> = spec.levels.iter().filter(|l| l.k == k).collect();
            sector.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
            if let Some(l) = sector.get(band + skip) {
                points.push((l.p, l.epsilon));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let xs: Vec<f64> = points.iter().map(|(p, _)| (2.0 * (p / 2.0).sin()).powi(2)).collect();
        let ys: Vec<f64> = points.iter().map(|(_, e)| e * e).collect();
        let mut distinct = xs.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if distinct.len() < 2 {
            return Err(Error::Domain(format!("band {band} has fewer than two distinct momenta")));
        }
        let len = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / len;
        let my = ys.iter().sum::<f64>() / len;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let c = sxy / sxx;
        let m2 = my - c * mx;
        let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - m2 - c * x).powi(2)).sum::<f64>() / len).sqrt();
        fits.push(BandFit { band, mass: m2.max(0.0).sqrt(), c, rms_residual: rms, points });
    }
    Ok(fits)
}

/// Writes `p,epsilon` rows with a header.
pub fn write_csv<W: Write>(levels: &[MomentumLevel], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["p", "epsilon"]).map_err(io)?;
    for l in levels {
        w.write_record([l.p.to_string(), l.epsilon.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
