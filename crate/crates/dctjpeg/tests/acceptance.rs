//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Every criterion pins its tolerance in code; run with
//! `cargo test -p dctjpeg --test acceptance`.

mod support;

use std::collections::BTreeMap;

use dctjpeg::dct::{dct2_direct, dct2_fast, idct2_direct, CoeffBlock, SpatialBlock};
use dctjpeg::entropy::{
    bit_decode, bit_encode, build_huffman_lengths, canonicalize, count_symbols,
    dc_differential_decode, dc_differential_encode, encoder_spec, inverse_zigzag, magnitude_size,
    runlength_decode, runlength_encode, zigzag_scan, CoefficientSymbol, FrequencyTable,
};
use dctjpeg::quant::{
    dequantize_block, quantize_block, QuantTable, QuantizedBlock, LUMINANCE_DIVISORS,
};
use dctjpeg::{decode_image, encode_image, metrics, EncodeParams, RasterImage};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::{max_abs_diff, natural_gray};

fn random_spatial(rng: &mut StdRng) -> SpatialBlock {
    let mut b = [[0.0f64; 8]; 8];
    for row in b.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.random_range(-128.0..=127.0);
        }
    }
    SpatialBlock(b)
}

fn max_abs(a: &[[f64; 8]; 8], b: &[[f64; 8]; 8]) -> f64 {
    let mut m = 0.0f64;
    for r in 0..8 {
        for c in 0..8 {
            m = m.max((a[r][c] - b[r][c]).abs());
        }
    }
    m
}

/// Every file the acceptance suite emits, rebuilt deterministically so each
/// criterion sees the identical corpus.
fn corpus() -> Vec<(String, RasterImage, EncodeParams, Vec<u8>)> {
    let mut files = Vec::new();
    // Three natural 512x512 grayscale images at three qualities.
    for (name, seed) in [("natural-a", 11u64), ("natural-b", 22), ("natural-c", 33)] {
        let image = natural_gray(512, 512, seed);
        for quality in [10u8, 50, 90] {
            let params = EncodeParams { quality, ..Default::default() };
            let bytes = encode_image(&image, &params).expect("encode corpus image");
            files.push((format!("{name}-q{quality}"), image.clone(), params, bytes));
        }
    }
    // Near-lossless set: all-ones tables (quality 100).
    let q100 = EncodeParams { quality: 100, ..Default::default() };
    let mut rng = StdRng::seed_from_u64(0xfade);
    for (label, w, h) in [("random-64", 64usize, 64usize), ("random-256", 256, 192)] {
        let data: Vec<u8> = (0..w * h).map(|_| rng.random()).collect();
        let image = RasterImage::gray(w, h, data).unwrap();
        let bytes = encode_image(&image, &q100).expect("encode random image");
        files.push((format!("{label}-q100"), image, q100, bytes));
    }
    for (label, w, h, seed) in [("natural-64", 64usize, 64usize, 5u64), ("natural-512", 512, 512, 6)]
    {
        let image = natural_gray(w, h, seed);
        let bytes = encode_image(&image, &q100).expect("encode natural image");
        files.push((format!("{label}-q100"), image, q100, bytes));
    }
    // Small file the robustness fuzzer mutates.
    let image = natural_gray(64, 64, 404);
    let params = EncodeParams::default();
    let bytes = encode_image(&image, &params).expect("encode fuzz base");
    files.push(("fuzz-base-q50".to_string(), image, params, bytes));
    files
}

#[test]
fn c01_dct_round_trip_and_fast_path_agree() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..1000 {
        let block = random_spatial(&mut rng);
        let direct = dct2_direct(&block);
        let fast = dct2_fast(&block);
        assert!(max_abs(&direct.0, &fast.0) < 1e-9, "fast path diverged from the direct sums");
        let back = idct2_direct(&direct);
        assert!(max_abs(&back.0, &block.0) < 1e-9, "direct round trip exceeded 1e-9");
    }
    println!("criterion 1 (DCT round trip + fast/direct agreement @1e-9): PASS");
}

#[test]
fn c02_energy_conservation() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..1000 {
        let block = random_spatial(&mut rng);
        let coeffs = dct2_fast(&block);
        let spatial: f64 = block.0.iter().flatten().map(|v| v * v).sum();
        let freq: f64 = coeffs.0.iter().flatten().map(|v| v * v).sum();
        assert!(
            (spatial - freq).abs() <= 1e-6 * spatial,
            "energy drifted: {spatial} vs {freq}"
        );
    }
    println!("criterion 2 (energy conservation @1e-6 relative): PASS");
}

#[test]
fn c03_quantization_error_bound() {
    let table = QuantTable::luminance();
    assert_eq!(table.divisors, LUMINANCE_DIVISORS);
    assert_eq!((table.divisors[0][0], table.divisors[7][7]), (16, 99));

    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..1000 {
        let mut c = [[0.0f64; 8]; 8];
        for row in c.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.random_range(-1024.0..=1024.0);
            }
        }
        let coeffs = CoeffBlock(c);
        let back = dequantize_block(&quantize_block(&coeffs, &table), &table);
        for u in 0..8 {
            for v in 0..8 {
                let bound = table.divisors[u][v] as f64 / 2.0 + 0.5;
                let err = (coeffs.0[u][v] - back.0[u][v]).abs();
                assert!(err <= bound, "|{}| > {bound} at ({u},{v})", err);
            }
        }
    }
    println!("criterion 3 (quantization bound Q/2 + 0.5): PASS");
}

#[test]
fn c04_zigzag_inverse_and_prefix() {
    let mut index_block = [[0i16; 8]; 8];
    for (r, row) in index_block.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = (r * 8 + c) as i16;
        }
    }
    let seq = zigzag_scan(&QuantizedBlock(index_block));
    assert_eq!(&seq[..8], &[0, 1, 8, 16, 9, 2, 3, 10], "scan prefix is wrong");

    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..10_000 {
        let mut b = [[0i16; 8]; 8];
        for row in b.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.random_range(-1024..=1024);
            }
        }
        let block = QuantizedBlock(b);
        let seq = zigzag_scan(&block);
        assert_eq!(inverse_zigzag(&seq), block);
        assert_eq!(zigzag_scan(&inverse_zigzag(&seq)), seq);
    }
    println!("criterion 4 (zigzag inverse pair + canonical prefix): PASS");
}

#[test]
fn c05_huffman_codes_are_optimal_prefix_codes() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..1000 {
        let n_symbols = rng.random_range(2usize..=64);
        let mut freqs = FrequencyTable::new();
        let mut total = 0u64;
        let mut pairs: BTreeMap<u16, u64> = BTreeMap::new();
        for _ in 0..n_symbols {
            let sym = rng.random_range(0u16..1000);
            let count = rng.random_range(1u64..=1_000_000);
            *pairs.entry(sym).or_insert(0) += count;
        }
        for (&sym, &count) in &pairs {
            freqs.record_count(sym, count);
            total += count;
        }

        let lengths = build_huffman_lengths(&freqs).unwrap();
        let spec = canonicalize(&lengths).unwrap();

        // Prefix-freeness, exhaustively over pairs.
        let codes: Vec<_> = spec.codes().values().copied().collect();
        for (i, a) in codes.iter().enumerate() {
            for b in codes.iter().skip(i + 1) {
                let (s, l) = if a.len <= b.len { (a, b) } else { (b, a) };
                assert!(l.bits >> (l.len - s.len) != s.bits, "prefix violation");
            }
        }
        // Kraft inequality.
        let kraft: f64 = codes.iter().map(|cw| (0.5f64).powi(cw.len as i32)).sum();
        assert!(kraft <= 1.0 + 1e-12, "Kraft sum {kraft}");

        // Entropy bound on the raw optimal lengths.
        let mut avg_len = 0.0f64;
        let mut entropy = 0.0f64;
        for (&sym, &count) in &pairs {
            let p = count as f64 / total as f64;
            avg_len += p * lengths[&sym] as f64;
            entropy -= p * p.log2();
        }
        assert!(
            entropy <= avg_len + 1e-9 && avg_len < entropy + 1.0,
            "average length {avg_len} outside [H, H+1) for H = {entropy}"
        );
    }

    // The skewed four-symbol fixture: 15 bits total, and no Kraft-valid
    // length assignment does better (brute force).
    let weights = [5u64, 2, 1, 1];
    let freqs = FrequencyTable::from_counts(
        weights.iter().enumerate().map(|(s, &w)| (s as u16, w)),
    )
    .unwrap();
    let lengths = build_huffman_lengths(&freqs).unwrap();
    let total_bits: u64 =
        weights.iter().enumerate().map(|(s, &w)| w * lengths[&(s as u16)] as u64).sum();
    assert_eq!(total_bits, 15);
    let mut best = u64::MAX;
    for l0 in 1u32..=8 {
        for l1 in 1u32..=8 {
            for l2 in 1u32..=8 {
                for l3 in 1u32..=8 {
                    let kraft = [l0, l1, l2, l3]
                        .iter()
                        .map(|&l| (0.5f64).powi(l as i32))
                        .sum::<f64>();
                    if kraft <= 1.0 + 1e-12 {
                        let cost = 5 * l0 as u64 + 2 * l1 as u64 + l2 as u64 + l3 as u64;
                        best = best.min(cost);
                    }
                }
            }
        }
    }
    assert_eq!(best, 15, "brute force found a shorter prefix code");
    println!("criterion 5 (prefix-free, Kraft, entropy bound, 15-bit fixture): PASS");
}

#[test]
fn c06_entropy_chain_round_trip() {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..1000 {
        let n_blocks = rng.random_range(1usize..=6);
        let mut dc_values = Vec::with_capacity(n_blocks);
        let mut acs: Vec<[i16; 63]> = Vec::with_capacity(n_blocks);
        for _ in 0..n_blocks {
            dc_values.push(rng.random_range(-1024i16..=1024));
            let mut ac = [0i16; 63];
            for v in ac.iter_mut() {
                if rng.random_range(0u8..5) == 0 {
                    *v = rng.random_range(-1023i16..=1023);
                }
            }
            acs.push(ac);
        }

        let mut stream = Vec::new();
        for (diff, ac) in dc_differential_encode(&dc_values).iter().zip(&acs) {
            stream.push(CoefficientSymbol::Dc {
                size: magnitude_size(*diff).unwrap(),
                amplitude: *diff,
            });
            stream.extend(runlength_encode(ac).unwrap());
        }
        let spec = encoder_spec(&count_symbols(&stream)).unwrap();
        let bytes = bit_encode(&stream, &spec).unwrap();
        let decoded = bit_decode(&bytes, &spec, stream.len()).unwrap();
        assert_eq!(decoded, stream, "bit chain not an identity");

        // Unwind run-length and DC prediction to the original values.
        let mut dc_diffs = Vec::new();
        let mut block_acs = Vec::new();
        let mut current: Option<Vec<CoefficientSymbol>> = None;
        for sym in decoded {
            match sym {
                CoefficientSymbol::Dc { amplitude, .. } => {
                    if let Some(done) = current.take() {
                        block_acs.push(runlength_decode(&done).unwrap());
                    }
                    dc_diffs.push(amplitude);
                    current = Some(Vec::new());
                }
                ac => current.as_mut().unwrap().push(ac),
            }
        }
        block_acs.push(runlength_decode(&current.unwrap()).unwrap());
        assert_eq!(dc_differential_decode(&dc_diffs), dc_values);
        assert_eq!(block_acs, acs);
    }
    println!("criterion 6 (runlength + DC differential + bit codec identity): PASS");
}

#[test]
fn c07_near_lossless_limit() {
    for (name, image, params, bytes) in corpus() {
        if params.quality != 100 {
            continue;
        }
        let decoded = decode_image(&bytes).unwrap();
        let err = max_abs_diff(&image, &decoded);
        assert!(err <= 2, "{name}: max per-pixel error {err} > 2");
    }
    println!("criterion 7 (all-ones tables, grayscale error <= 2): PASS");
}

#[test]
fn c08_end_to_end_quality_and_monotonicity() {
    let files = corpus();
    for name in ["natural-a", "natural-b", "natural-c"] {
        let by_quality: BTreeMap<u8, &(String, RasterImage, EncodeParams, Vec<u8>)> = files
            .iter()
            .filter(|(n, ..)| n.starts_with(name))
            .map(|f| (f.2.quality, f))
            .collect();
        let (image, bytes50) = (&by_quality[&50].1, &by_quality[&50].3);
        let decoded = decode_image(bytes50).unwrap();
        let psnr50 = metrics::psnr(image, &decoded).unwrap();
        let cr50 = metrics::compression_ratio(
            image.payload_bytes() as u64,
            bytes50.len() as u64,
        )
        .unwrap();
        assert!(psnr50 >= 30.0, "{name}: PSNR {psnr50:.2} dB below 30 at quality 50");
        assert!(cr50 >= 4.0, "{name}: CR {cr50:.2} below 4 at quality 50");

        let psnr10 =
            metrics::psnr(image, &decode_image(&by_quality[&10].3).unwrap()).unwrap();
        let psnr90 =
            metrics::psnr(image, &decode_image(&by_quality[&90].3).unwrap()).unwrap();
        assert!(psnr90 > psnr10, "{name}: PSNR not increasing with quality");
        assert!(
            by_quality[&90].3.len() > by_quality[&10].3.len(),
            "{name}: size not increasing with quality"
        );
    }
    println!("criterion 8 (PSNR >= 30 dB, CR >= 4, quality monotonicity): PASS");
}

#[test]
fn c09_determinism_and_parallel_equality() {
    for (name, image, params, bytes) in corpus() {
        let again = encode_image(&image, &params).unwrap();
        assert_eq!(again, bytes, "{name}: second encode differs");
        let parallel =
            encode_image(&image, &EncodeParams { parallel: true, ..params }).unwrap();
        assert_eq!(parallel, bytes, "{name}: parallel encode differs");
    }
    println!("criterion 9 (byte-identical repeat + parallel encodes): PASS");
}

#[test]
fn c10_interoperability() {
    for (name, _, _, bytes) in corpus() {
        assert_eq!(&bytes[..2], &[0xFF, 0xD8], "{name}: missing SOI");
        assert_eq!(&bytes[bytes.len() - 2..], &[0xFF, 0xD9], "{name}: missing EOI");

        let ours = decode_image(&bytes).unwrap();
        let reference = image::load_from_memory(&bytes)
            .unwrap_or_else(|e| panic!("{name}: reference decoder failed: {e}"))
            .to_luma8();
        assert_eq!(
            (reference.width() as usize, reference.height() as usize),
            (ours.width(), ours.height()),
            "{name}: dimension mismatch"
        );
        for (i, (&theirs, &mine)) in
            reference.as_raw().iter().zip(ours.plane(0)).enumerate()
        {
            let d = (theirs as i32 - mine as i32).abs();
            assert!(d <= 1, "{name}: sample {i} differs by {d} (reference {theirs}, ours {mine})");
        }
    }
    println!("criterion 10 (reference decoder reads every file, agreement within +/-1): PASS");
}

#[test]
fn c11_metrics_match_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let w = rng.random_range(1usize..40);
        let h = rng.random_range(1usize..40);
        let channels = if rng.random_range(0u8..2) == 0 { 1usize } else { 3 };
        let planes_x: Vec<Vec<u8>> =
            (0..channels).map(|_| (0..w * h).map(|_| rng.random()).collect()).collect();
        let planes_y: Vec<Vec<u8>> =
            (0..channels).map(|_| (0..w * h).map(|_| rng.random()).collect()).collect();
        let x = RasterImage::new(w, h, planes_x.clone()).unwrap();
        let y = RasterImage::new(w, h, planes_y.clone()).unwrap();

        // Brute-force recomputation, straight off the definitions.
        let mut acc = 0.0f64;
        for ch in 0..channels {
            for i in 0..h {
                for j in 0..w {
                    let d = planes_x[ch][i * w + j] as f64 - planes_y[ch][i * w + j] as f64;
                    acc += d * d;
                }
            }
        }
        let mse_ref = acc / (channels * w * h) as f64;
        let psnr_ref = 10.0 * (255.0f64 * 255.0 / mse_ref).log10();
        let n1 = rng.random_range(1u64..1_000_000);
        let n2 = rng.random_range(1u64..1_000_000);
        let cr_ref = n1 as f64 / n2 as f64;

        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        assert!(rel(metrics::mse(&x, &y).unwrap(), mse_ref) <= 1e-12);
        if mse_ref > 0.0 {
            assert!(rel(metrics::psnr(&x, &y).unwrap(), psnr_ref) <= 1e-12);
        }
        assert!(rel(metrics::compression_ratio(n1, n2).unwrap(), cr_ref) <= 1e-12);
    }
    println!("criterion 11 (CR/MSE/PSNR match brute force @1e-12): PASS");
}

#[test]
fn c12_decoder_robustness_fuzz() {
    let files = corpus();
    let (_, _, _, base) = files
        .iter()
        .find(|(name, ..)| name == "fuzz-base-q50")
        .expect("fuzz base present");

    let mut rng = StdRng::seed_from_u64(12);
    let mut failures = 0usize;
    for trial in 0..10_000 {
        let mut mutated = base.clone();
        match rng.random_range(0u8..3) {
            0 => {
                // Truncate.
                let keep = rng.random_range(0..mutated.len());
                mutated.truncate(keep);
            }
            1 => {
                // Overwrite one byte.
                let at = rng.random_range(0..mutated.len());
                mutated[at] = rng.random();
            }
            _ => {
                // Flip one bit.
                let at = rng.random_range(0..mutated.len());
                mutated[at] ^= 1 << rng.random_range(0u8..8);
            }
        }
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            decode_image(&mutated)
        }));
        match outcome {
            Ok(Ok(_)) => {} // mutation survived as a valid stream
            Ok(Err(_)) => failures += 1,
            Err(_) => panic!("decoder panicked on mutation {trial}"),
        }
    }
    assert!(failures > 0, "fuzzer never produced an invalid stream");
    println!("criterion 12 (10^4 mutations, no crashes, clean errors): PASS");
}
