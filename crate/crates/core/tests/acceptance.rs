//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Reference designs, base/exponent matrices and the schedule live in
//! `paper-examples/` at the workspace root.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trade_ldpc::builder::{parity_check_from_design, DesignMatrices};
use trade_ldpc::design::Design;
use trade_ldpc::matrix::{weight_profile, Regularity};
use trade_ldpc::qc;
use trade_ldpc::sc;
use trade_ldpc::sim;
use trade_ldpc::tanner::tanner_girth;
use trade_ldpc::trades::{build_trade_graph, find_volume2_trades};

fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../paper-examples")
}

fn load_design(name: &str) -> Design {
    Design::from_path(&examples_dir().join(name)).expect(name)
}

fn load_exponent(name: &str) -> qc::ExponentMatrix {
    let text = std::fs::read_to_string(examples_dir().join(name)).expect(name);
    qc::parse_exponent_matrix(&text).expect(name)
}

fn pipeline(name: &str) -> DesignMatrices {
    parity_check_from_design(&load_design(name)).expect(name)
}

/// The five-copy column-weight-3 base matrix grown from the 5x8 trade matrix.
fn five_copy_base() -> qc::BaseMatrix {
    let c = pipeline("dgdd_2_4b.design").c;
    let p = qc::build_p(&c, 5).expect("copy search");
    assert_eq!(p.offsets, vec![0, 1, 2, 3, 4]);
    qc::assign_weights(&p, 3, 3).expect("weight assignment")
}

/// The all-2 base matrix on the 8x12 transposed trade matrix.
fn all_two_base() -> qc::BaseMatrix {
    let h = pipeline("dgdd_2_4a.design").h;
    let p = qc::build_p(&h, 8).expect("copy search");
    assert_eq!(p.offsets, vec![0]);
    qc::assign_weights(&p, 4, 2).expect("weight assignment")
}

#[test]
fn criterion_01_trade_detection_pipeline() {
    let start = Instant::now();
    let design = load_design("dgdd_2_4a.design");
    let trades = find_volume2_trades(&design).unwrap();
    assert_eq!(trades.len(), 12, "volume-2 trade count");
    let graph = build_trade_graph(&design, &trades);
    assert_eq!(graph.n_vertices, 8);
    assert_eq!(graph.girth(), Some(4), "trade graph girth (triangle-free)");
    let bound = graph.defining_set_lower_bound();
    assert!(bound >= 4, "defining-set lower bound {bound} < 4");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "pipeline took {elapsed:?}");
    println!("[acceptance] criterion 01 PASS: 12 trades, girth 4, bound {bound}, {elapsed:?}");
}

#[test]
fn criterion_02_h_matrix_reproduction() {
    let m = pipeline("dgdd_2_4a.design");
    assert_eq!((m.h.n_rows(), m.h.n_cols()), (8, 12));
    let rows: Vec<String> = [
        "7,5,0,2", "5,7,1,3", "3,0,5,6", "1,2,6,5", "0,3,4,7", "2,1,7,4", "6,4,3,1", "4,6,2,0",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let cols: Vec<String> = [
        "0,2", "0,3", "1,2", "1,3", "0,5", "1,7", "2,6", "3,4", "4,6", "4,7", "5,6", "5,7",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let reference = [
        "100010000001",
        "000101000001",
        "010010000010",
        "001000100010",
        "010000010100",
        "001001000100",
        "000100011000",
        "100000101000",
    ];
    let permuted = m.h.permute_to(&rows, &cols).expect("label-driven sort");
    for (r, bits) in reference.iter().enumerate() {
        for (c, ch) in bits.chars().enumerate() {
            assert_eq!(
                permuted.get(r, c),
                ch == '1',
                "bit mismatch at row {} col {}",
                rows[r],
                cols[c]
            );
        }
    }
    println!("[acceptance] criterion 02 PASS: 8x12 parity-check matrix reproduced bit-exactly");
}

#[test]
fn criterion_03_c_matrix_reproduction() {
    let m = pipeline("dgdd_2_4b.design");
    assert_eq!((m.c.n_rows(), m.c.n_cols()), (5, 8));
    let reference = ["01001000", "10000010", "00010001", "10000100", "01100000"];
    assert_eq!(
        m.c.row_labels(),
        &["0,2", "0,3", "1,4", "5,6", "5,7"],
        "traded pair rows"
    );
    for (r, bits) in reference.iter().enumerate() {
        for (c, ch) in bits.chars().enumerate() {
            assert_eq!(m.c.get(r, c), ch == '1', "bit mismatch at ({r},{c})");
        }
    }
    println!("[acceptance] criterion 03 PASS: 5x8 pruned matrix reproduced bit-exactly");
}

#[test]
fn criterion_04_girth_equivalence() {
    let start = Instant::now();
    let cases = [
        ("dgdd_2_4a.design", 8usize),
        ("dd_20_5_1.design", 8),
        ("dgdd_3_6.design", 6),
        ("dgdd_4_16.design", 16),
    ];
    let mut summary = Vec::new();
    for (name, expected_tanner) in cases {
        let design = load_design(name);
        let trades = find_volume2_trades(&design).unwrap();
        let graph = build_trade_graph(&design, &trades);
        let trade_girth = graph.girth().expect("trade graph has cycles");
        let m = parity_check_from_design(&design).unwrap();
        let tanner = tanner_girth(&m.h).expect("Tanner graph has cycles");
        assert_eq!(
            tanner,
            2 * trade_girth,
            "{name}: Tanner girth {tanner} is not twice the trade girth {trade_girth}"
        );
        summary.push(format!("{name} {tanner}"));
        assert_eq!(
            tanner, expected_tanner,
            "{name}: reference girth {expected_tanner} not attained; the shipped fixture \
             reaches trade girth {trade_girth} (Tanner {tanner})"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "[acceptance] criterion 04 PASS: girth doubling on {} ({elapsed:?})",
        summary.join(", ")
    );
}

#[test]
fn criterion_05_lifting_degree_bounds() {
    // worked 3x4 example
    let text = std::fs::read_to_string(examples_dir().join("girth6_3x4.base")).unwrap();
    let w = qc::parse_base_matrix(&text).unwrap();
    let b = qc::bound_girth6(&w);
    assert_eq!((b.x, b.y, b.z, b.n_lower), (5, 5, 13, 13));

    // fully-connected 2x16 with entries 1 and 2: N >= 32
    let row_a: Vec<u32> = (0..16).map(|j| 1 + (j % 2) as u32).collect();
    let row_b: Vec<u32> = (0..16).map(|j| 2 - (j % 2) as u32).collect();
    let w216 = qc::BaseMatrix::from_entries(vec![row_a, row_b], None).unwrap();
    assert_eq!(qc::bound_girth6(&w216).n_lower, 32);

    // five-copy trade-based base: X = 20, Y = 3, N >= 40
    let w5 = five_copy_base();
    let tb = qc::bound_girth6_tradebased(&w5).unwrap();
    assert_eq!((tb.x, tb.y, tb.n_lower), (20, 3, 40));

    // fully-connected 2x3 all-2: N >= 12
    let wfc = qc::BaseMatrix::from_entries(vec![vec![2, 2, 2], vec![2, 2, 2]], None).unwrap();
    assert_eq!(qc::bound_girth6(&wfc).n_lower, 12);

    // trade-based all-2 8x12: N >= 6
    let w2 = all_two_base();
    let tb2 = qc::bound_girth6_tradebased(&w2).unwrap();
    assert_eq!((tb2.x, tb2.y, tb2.n_lower), (3, 2, 6));

    println!("[acceptance] criterion 05 PASS: bounds 13 / 32 / 40 / 12 / 6 exact");
}

#[test]
fn criterion_06_girth6_verification() {
    for (name, rows, cols) in [
        ("fully_connected_2x3.exponent", 2usize, 3usize),
        ("trade_based_8x12.exponent", 8, 12),
    ] {
        let b = load_exponent(name);
        assert_eq!((b.n_rows(), b.n_cols()), (rows, cols));
        assert!(
            qc::check_girth6(&b).is_free_of_4_cycles(),
            "{name}: difference criterion failed"
        );
        let lifted = b.lift();
        assert_eq!(
            tanner_girth(&lifted),
            Some(6),
            "{name}: lifted girth is not exactly 6"
        );
    }
    // the 24-entry base-copy assignment at N = 41, replicated
    let b1 = vec![
        vec![
            vec![],
            vec![0],
            vec![],
            vec![],
            vec![0, 1, 3],
            vec![],
            vec![],
            vec![],
        ],
        vec![
            vec![0],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![0, 4, 9],
            vec![],
        ],
        vec![
            vec![],
            vec![],
            vec![],
            vec![0, 6, 13],
            vec![],
            vec![],
            vec![],
            vec![0, 8, 22],
        ],
        vec![
            vec![7, 27],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![0, 10, 25],
            vec![],
            vec![],
        ],
        vec![
            vec![],
            vec![19, 36],
            vec![6, 24, 36],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![],
        ],
    ];
    let b = qc::ExponentMatrix::replicate(41, &b1, &[0, 1, 2, 3, 4]).unwrap();
    assert!(qc::check_girth6(&b).is_free_of_4_cycles());
    assert!(tanner_girth(&b.lift()).unwrap() >= 6);
    println!("[acceptance] criterion 06 PASS: printed exponent matrices verify at girth 6");
}

#[test]
fn criterion_07_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    let mut checked = 0;
    while checked < 100 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let n_lift = rng.gen_range(4..=50);
        let cells: Vec<Vec<Vec<usize>>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let weight = match rng.gen_range(0..10) {
                            0..=3 => 0,
                            4..=6 => 1,
                            7..=8 => 2,
                            _ => 3,
                        };
                        let mut vals = Vec::new();
                        while vals.len() < weight.min(n_lift) {
                            let v = rng.gen_range(0..n_lift);
                            if !vals.contains(&v) {
                                vals.push(v);
                            }
                        }
                        vals
                    })
                    .collect()
            })
            .collect();
        if cells.iter().flatten().all(|c| c.is_empty()) {
            continue;
        }
        let b = qc::ExponentMatrix::new(n_lift, cells, None).unwrap();
        let lifted = b.lift();
        let girth = tanner_girth(&lifted);
        let free4 = qc::check_girth6(&b).is_free_of_4_cycles();
        assert_eq!(
            free4,
            girth.is_none_or(|g| g >= 6),
            "difference criterion disagrees with BFS girth {girth:?} (N={n_lift})"
        );
        let exists: Vec<bool> = (2..=4).map(|k| qc::cycle_exists(&b, k)).collect();
        for k in 2..=4usize {
            let any_le_k = exists[..k - 1].iter().any(|&e| e);
            let girth_le_2k = girth.is_some_and(|g| g <= 2 * k);
            assert_eq!(
                any_le_k,
                girth_le_2k,
                "walk enumeration disagrees with BFS at 2k={} (girth {girth:?}, N={n_lift})",
                2 * k
            );
        }
        checked += 1;
    }
    println!("[acceptance] criterion 07 PASS: {checked} random matrices, zero disagreements");
}

#[test]
fn criterion_08_structural_inequalities() {
    let mut bases = vec![five_copy_base(), all_two_base()];
    // two more trade-based bases from the developed designs
    let c27 = pipeline("dgdd_2_7.design").h;
    let p27 = qc::build_p(&c27, 3).unwrap();
    bases.push(qc::assign_weights(&p27, 4, 3).unwrap());
    let h20 = pipeline("dd_20_5_1.design").h;
    let p20 = qc::build_p(&h20, 2).unwrap();
    bases.push(qc::assign_weights(&p20, 4, 2).unwrap());

    for (idx, w) in bases.iter().enumerate() {
        assert!(
            w.all_positive_2x2().is_none(),
            "base {idx} is not trade-based"
        );
        let g = qc::bound_girth6(w);
        assert!(
            g.z <= 2 * g.y,
            "base {idx}: Z = {} exceeds 2Y = {}",
            g.z,
            2 * g.y
        );
        for i in 0..w.n_rows() {
            for ip in i + 1..w.n_rows() {
                for j in 0..w.n_cols() {
                    for jp in j + 1..w.n_cols() {
                        assert_eq!(
                            qc::quad_delta_count(w, i, ip, j, jp),
                            0,
                            "base {idx}: quad ({i},{ip};{j},{jp}) has common-coordinate pairs"
                        );
                    }
                }
            }
        }
    }
    println!(
        "[acceptance] criterion 08 PASS: Z <= 2Y and zero quad counts on {} trade-based bases",
        bases.len()
    );
}

#[test]
fn criterion_09_sc_reproduction() {
    let c = pipeline("dgdd_2_4a.design").c;
    let text = std::fs::read_to_string(examples_dir().join("sc_l3.schedule")).unwrap();
    let schedule = sc::SCSchedule::from_toml_str(&c, &text).expect("schedule loads");
    assert_eq!(schedule.m_h, 2);
    let assembled = sc::assemble_hl(&c, &schedule).unwrap();
    assert_eq!((assembled.h.n_rows(), assembled.h.n_cols()), (20, 24));
    assert!(
        assembled.h.col_weights().iter().all(|&w| w == 3),
        "column weights must all be 3"
    );
    assert_eq!(assembled.constraint_length(), 24);
    let report = sc::check_coupling(&c, &schedule).unwrap();
    let girth = tanner_girth(&assembled.h);
    assert!(
        report.ok(),
        "shipped schedule violates the block-pair conditions at {:?} \
         (assembled Tanner girth {girth:?}); the fixture reproduces its source \
         verbatim and genuinely contains these 4-cycles",
        report.violations.first()
    );
    assert!(girth.is_none_or(|g| g >= 6), "girth {girth:?} below 6");
    println!("[acceptance] criterion 09 PASS: 20x24 assembly, weight 3, memory 2, girth >= 6");
}

#[test]
fn criterion_10_search_space_count() {
    let w = five_copy_base();
    let outcome = qc::search_exponent(&w, 41, qc::GirthTarget::Six).expect("search succeeds");
    assert_eq!(outcome.stats.assigned_entries, 24, "base-copy entries");
    assert_eq!(outcome.stats.total_entries, 120, "replicated entries");
    assert!(qc::check_girth6(&outcome.exponent).is_free_of_4_cycles());
    println!(
        "[acceptance] criterion 10 PASS: 24 assigned vs 120 replicated entries ({} nodes)",
        outcome.stats.explored_nodes
    );
}

#[test]
fn criterion_11_decoding_comparison() {
    let start = Instant::now();
    let trade_based = load_exponent("trade_based_8x12.exponent").lift();
    let fully_connected = load_exponent("fully_connected_2x3.exponent").lift();
    assert_eq!((trade_based.n_rows(), trade_based.n_cols()), (56, 84));
    assert_eq!(
        (fully_connected.n_rows(), fully_connected.n_cols()),
        (24, 36)
    );
    for h in [&trade_based, &fully_connected] {
        let profile = weight_profile(h);
        assert_eq!(
            profile.classify(),
            Regularity::Regular { column: 4, row: 6 }
        );
        // decoder sanity: noiseless input decodes immediately
        let clean = vec![25.0; h.n_cols()];
        let r = sim::sum_product_decode(h, &clean, 50).unwrap();
        assert!(r.syndrome_zero && r.hard_decision.iter().all(|&b| b == 0));
    }
    let points = [2.0, 2.5, 3.0];
    let stop = sim::SweepStop {
        min_frame_errors: 100,
        max_frames: 200_000,
    };
    let tb = sim::ber_sweep(&trade_based, &points, stop, 2026, 50).unwrap();
    let fc = sim::ber_sweep(&fully_connected, &points, stop, 8102, 50).unwrap();
    for (a, b) in tb.iter().zip(&fc) {
        assert!(
            a.frame_errors >= 100 && b.frame_errors >= 100,
            "not enough frame errors at {} dB",
            a.eb_n0_db
        );
        assert!(
            a.ber < b.ber,
            "trade-based BER {} not below fully-connected {} at {} dB",
            a.ber,
            b.ber,
            a.eb_n0_db
        );
    }
    // channel monotonicity within each code
    assert!(tb[0].ber > tb[2].ber);
    assert!(fc[0].ber > fc[2].ber);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    let summary: Vec<String> = tb
        .iter()
        .zip(&fc)
        .map(|(a, b)| format!("{}dB {:.2e}<{:.2e}", a.eb_n0_db, a.ber, b.ber))
        .collect();
    println!(
        "[acceptance] criterion 11 PASS: {} ({elapsed:?})",
        summary.join(", ")
    );
}
