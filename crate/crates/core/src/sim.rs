//! Binary-input AWGN simulation with flooding sum-product decoding.
//!
//! Transmission is BPSK (0 -> +1, 1 -> -1) of the all-zero codeword, which
//! lies in every code here, so no encoder is needed. Noise is generated by
//! Box-Muller over a ChaCha8 stream keyed by `(seed, point, frame)`, making
//! every frame reproducible independently of how frames are scheduled across
//! worker threads.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::SparseBinaryMatrix;

/// Messages are saturated at this magnitude to keep `atanh` finite.
pub const LLR_SATURATION: f64 = 30.0;

#[derive(Debug, Clone, Copy)]
pub struct ChannelConfig {
    pub eb_n0_db: f64,
    pub code_rate: f64,
    pub seed: u64,
}

impl ChannelConfig {
    /// Noise variance per dimension for BPSK at the configured Eb/N0.
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.code_rate * 10f64.powf(self.eb_n0_db / 10.0))
    }
}

/// Counter-keyed Gaussian stream: ChaCha8 keyed by `(seed, point, frame)`,
/// uniforms from the top 53 bits mapped into `(0, 1]`, pairs combined by
/// Box-Muller (the sine partner of each pair is discarded).
struct GaussianStream {
    rng: ChaCha8Rng,
}

impl GaussianStream {
    fn new(seed: u64, point: u64, frame: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&point.to_le_bytes());
        key[16..24].copy_from_slice(&frame.to_le_bytes());
        GaussianStream {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    fn uniform_01(&mut self) -> f64 {
        // (0, 1]: never zero, so the logarithm stays finite
        ((self.rng.next_u64() >> 11) + 1) as f64 / (1u64 << 53) as f64
    }

    fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform_01();
        let u2 = self.uniform_01();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Channel LLRs `2y / sigma^2` for one frame of the given codeword.
pub fn transmit(codeword: &[u8], config: &ChannelConfig, frame: u64) -> Vec<f64> {
    transmit_point(codeword, config, 0, frame)
}

fn transmit_point(codeword: &[u8], config: &ChannelConfig, point: u64, frame: u64) -> Vec<f64> {
    let variance = config.noise_variance();
    let sigma = variance.sqrt();
    let mut noise = GaussianStream::new(config.seed, point, frame);
    codeword
        .iter()
        .map(|&bit| {
            let tx = if bit == 0 { 1.0 } else { -1.0 };
            let y = tx + sigma * noise.standard_normal();
            2.0 * y / variance
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub hard_decision: Vec<u8>,
    pub iterations_used: usize,
    pub syndrome_zero: bool,
}

/// Rejects matrices that cannot drive the decoder (all-zero columns).
pub fn validate_for_decoding(h: &SparseBinaryMatrix) -> Result<()> {
    if let Some(col) = h.col_weights().iter().position(|&w| w == 0) {
        return Err(Error::ZeroColumn(col));
    }
    Ok(())
}

/// Edge-list form of a parity-check matrix for message passing.
struct Edges {
    n_cols: usize,
    check_edges: Vec<Vec<usize>>, // per check: edge indices
    var_edges: Vec<Vec<usize>>,   // per variable: edge indices
    edge_var: Vec<usize>,
}

impl Edges {
    fn new(h: &SparseBinaryMatrix) -> Self {
        let mut check_edges = Vec::with_capacity(h.n_rows());
        let mut var_edges = vec![Vec::new(); h.n_cols()];
        let mut edge_var = Vec::new();
        for row in h.rows() {
            let mut edges = Vec::with_capacity(row.len());
            for &v in row {
                edges.push(edge_var.len());
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_edges.push(edges);
        }
        Edges {
            n_cols: h.n_cols(),
            check_edges,
            var_edges,
            edge_var,
        }
    }
}

/// Flooding sum-product decoding with tanh-rule check updates and early
/// stop on a zero syndrome.
pub fn sum_product_decode(
    h: &SparseBinaryMatrix,
    llrs: &[f64],
    max_iter: usize,
) -> Result<DecodeResult> {
    if let Some(pos) = llrs.iter().position(|l| !l.is_finite()) {
        return Err(Error::NonFiniteLlr(pos));
    }
    assert_eq!(llrs.len(), h.n_cols(), "LLR length must match columns");
    let edges = Edges::new(h);
    decode_with(&edges, llrs, max_iter)
}

fn decode_with(edges: &Edges, llrs: &[f64], max_iter: usize) -> Result<DecodeResult> {
    let ne = edges.edge_var.len();
    let mut c2v = vec![0.0f64; ne];
    let mut totals = vec![0.0f64; edges.n_cols];
    let mut hard = vec![0u8; edges.n_cols];
    let mut tanhs = Vec::new();
    for iter in 0..=max_iter {
        for v in 0..edges.n_cols {
            totals[v] = llrs[v] + edges.var_edges[v].iter().map(|&e| c2v[e]).sum::<f64>();
            hard[v] = (totals[v] < 0.0) as u8;
        }
        let syndrome_zero = edges.check_edges.iter().all(|ce| {
            ce.iter()
                .map(|&e| hard[edges.edge_var[e]] as u32)
                .sum::<u32>()
                % 2
                == 0
        });
        if syndrome_zero || iter == max_iter {
            return Ok(DecodeResult {
                hard_decision: hard,
                iterations_used: iter,
                syndrome_zero,
            });
        }
        for ce in &edges.check_edges {
            tanhs.clear();
            tanhs.extend(ce.iter().map(|&e| {
                let v2c =
                    (totals[edges.edge_var[e]] - c2v[e]).clamp(-LLR_SATURATION, LLR_SATURATION);
                (v2c / 2.0).tanh()
            }));
            // leave-one-out products via prefix/suffix scans
            let deg = ce.len();
            let mut suffix = vec![1.0f64; deg + 1];
            for i in (0..deg).rev() {
                suffix[i] = suffix[i + 1] * tanhs[i];
            }
            let mut prefix = 1.0f64;
            for i in 0..deg {
                let others = prefix * suffix[i + 1];
                let p = others.clamp(-0.999_999_999_999_999, 0.999_999_999_999_999);
                c2v[ce[i]] = (2.0 * p.atanh()).clamp(-LLR_SATURATION, LLR_SATURATION);
                prefix *= tanhs[i];
            }
        }
    }
    unreachable!("loop returns at max_iter");
}

/// GF(2) rank by elimination over packed 64-bit words.
pub fn gf2_rank(h: &SparseBinaryMatrix) -> usize {
    let words = h.n_cols().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = h
        .rows()
        .map(|r| {
            let mut packed = vec![0u64; words];
            for &c in r {
                packed[c / 64] |= 1 << (c % 64);
            }
            packed
        })
        .collect();
    let mut rank = 0;
    for col in 0..h.n_cols() {
        let (w, b) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Code rate `(n - rank) / n`.
pub fn code_rate(h: &SparseBinaryMatrix) -> f64 {
    (h.n_cols() - gf2_rank(h)) as f64 / h.n_cols() as f64
}

#[derive(Debug, Clone, Copy)]
pub struct SweepStop {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for SweepStop {
    fn default() -> Self {
        SweepStop {
            min_frame_errors: 100,
            max_frames: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub eb_n0_db: f64,
    pub ber: f64,
    pub fer: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
}

pub const SWEEP_CSV_HEADER: &str = "ebno_db,ber,fer,frames,bit_errors,frame_errors";

impl SweepPoint {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.eb_n0_db, self.ber, self.fer, self.frames, self.bit_errors, self.frame_errors
        )
    }
}

/// Monte-Carlo BER/FER sweep with all-zero-codeword transmission.
///
/// Frames run in parallel batches; results are folded in frame order, so the
/// stopping frame is independent of thread count. A point stops once it has
/// `min_frame_errors` frame errors or `max_frames` frames.
pub fn ber_sweep(
    h: &SparseBinaryMatrix,
    eb_n0_list: &[f64],
    stop: SweepStop,
    seed: u64,
    max_iter: usize,
) -> Result<Vec<SweepPoint>> {
    validate_for_decoding(h)?;
    let rate = code_rate(h);
    let edges = Edges::new(h);
    let n = h.n_cols();
    let codeword = vec![0u8; n];
    let mut out = Vec::new();
    const BATCH: u64 = 256;
    for (point_idx, &eb_n0_db) in eb_n0_list.iter().enumerate() {
        let config = ChannelConfig {
            eb_n0_db,
            code_rate: rate,
            seed,
        };
        let mut frames = 0u64;
        let mut bit_errors = 0u64;
        let mut frame_errors = 0u64;
        while frames < stop.max_frames && frame_errors < stop.min_frame_errors {
            let batch = BATCH.min(stop.max_frames - frames);
            let results: Vec<(u64, bool)> = (frames..frames + batch)
                .into_par_iter()
                .map(|frame| {
                    let llrs = transmit_point(&codeword, &config, point_idx as u64, frame);
                    let decoded =
                        decode_with(&edges, &llrs, max_iter).expect("channel LLRs are finite");
                    debug_assert!(
                        !decoded.syndrome_zero || in_null_space(&edges, &decoded.hard_decision)
                    );
                    let errors = decoded.hard_decision.iter().map(|&b| b as u64).sum::<u64>();
                    (errors, errors > 0)
                })
                .collect();
            for (errors, is_error) in results {
                frames += 1;
                bit_errors += errors;
                frame_errors += is_error as u64;
                if frame_errors >= stop.min_frame_errors || frames >= stop.max_frames {
                    break;
                }
            }
        }
        out.push(SweepPoint {
            eb_n0_db,
            ber: if frames > 0 {
                bit_errors as f64 / (frames * n as u64) as f64
            } else {
                0.0
            },
            fer: if frames > 0 {
                frame_errors as f64 / frames as f64
            } else {
                0.0
            },
            frames,
            bit_errors,
            frame_errors,
        });
    }
    Ok(out)
}

fn in_null_space(edges: &Edges, word: &[u8]) -> bool {
    edges.check_edges.iter().all(|ce| {
        ce.iter()
            .map(|&e| word[edges.edge_var[e]] as u32)
            .sum::<u32>()
            % 2
            == 0
    })
}
