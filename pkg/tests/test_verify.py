import json

import pytest
from hypothesis import given, strategies as st

from spectral_kmatch.extremal import build_extremal_thm12, build_extremal_thm14, clique_join
from spectral_kmatch.graph import GraphInputError, complete, path, star
from spectral_kmatch.io import parse_graph6, to_graph6, write_graph6_file
from spectral_kmatch.iso import are_isomorphic
from spectral_kmatch.spectral import spectral_radius
from spectral_kmatch.verify import (
    GraphVerdict,
    ReportSchemaError,
    RunReport,
    SampleSpec,
    TheoremRunConfig,
    Verdict,
    _classify_chunk,
    _save_checkpoint,
    classify_graph,
    load_corpus,
    read_report,
    recheck_verdict,
    run_threshold,
    sample_random_graphs,
    verify_theorem,
    write_report,
)

T12 = TheoremRunConfig("12", 8, 1, 1)


def classify(g, cfg=T12, threshold=None):
    th = run_threshold(cfg) if threshold is None else threshold
    v = classify_graph(g, cfg, th)
    assert recheck_verdict(g, cfg, th, v)
    return v


# -- single-graph classification --------------------------------------------------------

def test_classification_examples():
    assert classify(build_extremal_thm12(8, 1)).verdict is Verdict.EXTREMAL
    assert classify(complete(8)).verdict is Verdict.SATISFIES
    assert classify(path(8)).verdict is Verdict.BELOW


def test_relabelled_extremal_graph_is_still_the_exception():
    g = build_extremal_thm12(8, 1).relabel([7, 6, 5, 4, 3, 2, 1, 0])
    v = classify(g)
    assert v.verdict is Verdict.EXTREMAL and v.isomorphic_to_extremal


def test_connectivity_filter():
    cfg = TheoremRunConfig("12", 14, 2, 1)
    assert classify(path(14), cfg).verdict is Verdict.NOT_T_CONNECTED
    exact = TheoremRunConfig("12", 14, 2, 1, connectivity="exact")
    assert classify(complete(14), exact).verdict is Verdict.NOT_T_CONNECTED
    assert classify(complete(14), cfg).verdict is Verdict.SATISFIES


def test_fractional_filter_only_for_second_family():
    cfg = TheoremRunConfig("14", 12, 1, 1)
    assert classify(star(11), cfg).verdict is Verdict.NO_FPM
    assert classify(build_extremal_thm14(12, 1), cfg).verdict is Verdict.EXTREMAL


def test_tie_band_never_counts_as_counterexample():
    g = star(7)  # no perfect matching, rho = sqrt 7
    rho = spectral_radius(g)
    v = classify(g, T12, threshold=rho + 5e-9)
    assert v.verdict is Verdict.TIE and v.isomorphic_to_extremal is False and v.perfect_k_matching is False
    v = classify(complete(8), T12, threshold=7.0)
    assert v.verdict is Verdict.TIE and v.perfect_k_matching is True


def test_counterexample_under_artificial_threshold():
    v = classify(star(7), T12, threshold=2.0)
    assert v.verdict is Verdict.COUNTEREXAMPLE
    assert v.certificate.S == (0,) and v.certificate.slack == 7 - 1


def test_unsupported_marker_beyond_oracle_limit():
    cfg = TheoremRunConfig("12", 26, 1, 1, threshold_offset=-5.0)
    g = clique_join(1, [21, 3, 1])  # no perfect matching, not the extremal graph
    v = classify_graph(g, cfg, run_threshold(cfg))
    assert v.verdict is Verdict.UNSUPPORTED


def test_order_mismatch_rejected():
    with pytest.raises(GraphInputError):
        classify_graph(complete(6), T12, 5.0)


def test_config_validation():
    for bad in [dict(theorem="12", n=6, t=1, k=1), dict(theorem="12", n=8, t=1, k=2),
                dict(theorem="14", n=10, t=1, k=1), dict(theorem="11i", n=6, t=1, k=1),
                dict(theorem="12", n=8, t=1, k=1, corpus="graph6"),
                dict(theorem="12", n=8, t=1, k=1, workers=0)]:
        with pytest.raises((GraphInputError, ValueError)):
            TheoremRunConfig(**bad)


def test_graph_verdict_json_round_trip():
    v = classify(star(7), T12, threshold=2.0)
    assert GraphVerdict.from_json(json.loads(json.dumps(v.to_json()))) == v


# -- sampling ------------------------------------------------------------------------------

def test_sampling_determinism_and_identities():
    a = [to_graph6(g) for g in sample_random_graphs(12, "near-extremal", 20, seed=3, radius=3)]
    b = [to_graph6(g) for g in sample_random_graphs(12, "near-extremal", 20, seed=3, radius=3)]
    assert a == b
    assert list(sample_random_graphs(12, "near-extremal", 2, seed=1, radius=0)) == [build_extremal_thm14(12, 1)] * 2
    assert next(sample_random_graphs(9, "uniform", 1, seed=0, p=1.0)) == complete(9)
    with pytest.raises(GraphInputError):
        list(sample_random_graphs(12, "near-extremal", 0))
    with pytest.raises(GraphInputError):
        list(sample_random_graphs(12, "nonsense", 1))


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_perturbations_stay_within_radius(seed, radius):
    base = build_extremal_thm14(12, 1)
    for g in sample_random_graphs(12, "near-extremal", 5, seed=seed, radius=radius):
        diff = sum(1 for u in range(12) for v in range(u + 1, 12) if g.has_edge(u, v) != base.has_edge(u, v))
        assert 1 <= diff <= radius
        removed_at_join = sum(1 for v in range(1, 12) if base.has_edge(0, v) and not g.has_edge(0, v))
        assert removed_at_join <= 1


# -- whole runs -------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def small_report():
    return verify_theorem(TheoremRunConfig("11i", 6, 1, 3))


def test_small_family_run(small_report):
    r = small_report
    assert r.corpus_size == 112 and sum(r.counts.values()) == 112
    assert r.counts["COUNTEREXAMPLE"] == 0 and r.counts["extremal-exception"] == 1
    assert are_isomorphic(parse_graph6(r.exceptions[0]["graph6"]), build_extremal_thm12(6, 2))
    assert r.spot_check["checked"] == 100 and r.spot_check["failed"] == 0


def test_report_round_trip(small_report, tmp_path):
    p = tmp_path / "r.json"
    write_report(small_report, p)
    back = read_report(p)
    assert back.payload(with_timing=True) == small_report.payload(with_timing=True)
    d = json.loads(p.read_text())
    for key in ("schema", "theorem", "n", "t", "k", "threshold", "counts", "exceptions", "counterexamples", "ties"):
        assert key in d


def test_report_schema_mismatch(small_report, tmp_path):
    p = tmp_path / "r.json"
    d = small_report.to_json()
    d["schema"] = 99
    p.write_text(json.dumps(d))
    with pytest.raises(ReportSchemaError):
        read_report(p)


def test_empty_corpus_report(tmp_path):
    p = tmp_path / "empty.g6"
    p.write_text("")
    r = verify_theorem(TheoremRunConfig("12", 8, 1, 1, corpus="graph6", graph6_path=str(p)))
    assert r.corpus_size == 0 and all(c == 0 for c in r.counts.values())


def test_graph6_corpus_matches_internal(tmp_path, small_report):
    p = tmp_path / "six.g6"
    write_graph6_file(reversed([parse_graph6(s) for s in load_corpus(TheoremRunConfig("11i", 6, 1, 3))]), p)
    r = verify_theorem(TheoremRunConfig("11i", 6, 1, 3, corpus="graph6", graph6_path=str(p)))
    assert r.counts == small_report.counts
    assert r.exceptions == small_report.exceptions


def test_payload_independent_of_workers(small_report):
    r = verify_theorem(TheoremRunConfig("11i", 6, 1, 3, workers=2))
    assert r.payload() == small_report.payload()


def test_checkpoint_resume(tmp_path, small_report):
    ck = tmp_path / "run.ckpt"
    cfg = TheoremRunConfig("11i", 6, 1, 3, checkpoint=str(ck))
    corpus = load_corpus(cfg)
    partial = _classify_chunk((cfg, run_threshold(cfg), corpus[:40]))
    _save_checkpoint(cfg, partial)
    r = verify_theorem(cfg)
    assert r.payload() == small_report.payload()
    assert not ck.exists()


def test_checkpoint_from_other_config_rejected(tmp_path):
    ck = tmp_path / "run.ckpt"
    other = TheoremRunConfig("11i", 6, 1, 5, checkpoint=str(ck))
    _save_checkpoint(other, [])
    with pytest.raises(ReportSchemaError):
        verify_theorem(TheoremRunConfig("11i", 6, 1, 3, checkpoint=str(ck)))


def test_sampled_run_second_family():
    cfg = TheoremRunConfig("14", 12, 1, 1, corpus="sample", sample=SampleSpec("near-extremal", 300, radius=3), seed=5)
    r = verify_theorem(cfg)
    assert r.corpus_size == 300 and r.counts["COUNTEREXAMPLE"] == 0
    low = verify_theorem(TheoremRunConfig("14", 12, 1, 1, corpus="sample",
                                          sample=SampleSpec("near-extremal", 300, radius=3), seed=5,
                                          threshold_offset=-0.5))
    assert low.counts["COUNTEREXAMPLE"] >= 1 and low.spot_check["failed"] == 0
