use pdlab::harness::{ratio_series, tail_estimates, Compressor, Preset};
use pdlab::sequences::{build_s, CheckpointedStream};
use pdlab::zoo::{make_unary_squeezer, make_zone_compressor, plain_families, ZoneCompressorParams};

#[test]
fn lz_beats_every_plain_family() {
    for fam in plain_families() {
        let p = Preset::LzBeatsPd { family: fam.name.to_string(), stages: 3, word_len: 2048, min_block: 1 << 14, seed: 11 };
        let rep = p.run().unwrap();
        assert!(rep.passed(), "{}", rep.render());
    }
}

#[test]
fn squeezer_tail_estimate_near_limit() {
    let mut s = CheckpointedStream::new();
    for i in 1..=50 {
        s.push_repeat(&[0], 2000);
        s.mark(format!("z{i}"));
    }
    for k in [2usize, 3] {
        let rows = ratio_series(Compressor::Pdc(&make_unary_squeezer(k)), &s, s.len()).unwrap();
        let t = tail_estimates(&rows, 0.5).unwrap();
        let target = 1.0 / (k * k) as f64;
        assert!((t.liminf_estimate - target).abs() / target <= 0.02);
        assert!(t.liminf_estimate <= t.limsup_estimate);
    }
}

#[test]
fn zone_ratio_peaks_at_flag_ends() {
    let zone = make_zone_compressor(ZoneCompressorParams::new(4, 4, 16).unwrap());
    let s = build_s(4, 4, 12).unwrap();
    let rows = ratio_series(Compressor::Pdc(&zone), &s, s.len()).unwrap();
    let last: Vec<_> = rows.iter().filter(|r| r.label.as_deref().is_some_and(|l| l.starts_with("S12:"))).collect();
    let peak = last.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).unwrap();
    let label = peak.label.as_deref().unwrap();
    assert!(label.starts_with("S12:F") && label != "S12:F0", "peak at {label}");
}

#[test]
fn pd_beats_lz_preset() {
    let rep = Preset::pd_beats_lz().run().unwrap();
    assert!(rep.passed(), "{}", rep.render());
    assert_eq!(rep.series.len(), 2);
}
