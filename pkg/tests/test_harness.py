import json
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mstanley.cli import main
from mstanley.errors import InstanceSyntaxError, UnsupportedError
from mstanley.instances import (
    InstanceSpec,
    RandomParams,
    SamplingExhaustedError,
    format_instance,
    parse_instance,
    random_instance,
)
from mstanley.monomial import Monomial, PrimaryDecomposition, RingContext, as_primary, minimalize
from mstanley.pipeline import BatchParams, batch, verify
from mstanley.stanley import StanleyDecomposition, StanleyInterval, validate_decomposition

CASE_A_TEXT = "ring 4\ncomponent: x1^2, x1*x2, x2^2\ncomponent: x1^2, x3\ncomponent: x2, x4^2\n"
SPLIT5_TEXT = "ring 5\ncomponent: x1^2, x1*x2, x2^2\ncomponent: x1^2, x3, x5\ncomponent: x2, x4^2\n"


# -- instance format --------------------------------------------------------

def test_parse_examples():
    spec = parse_instance("ring 2\ncomponent: x1\ncomponent: x2")
    assert spec.n == 2 and len(spec.components) == 2
    spec = parse_instance(CASE_A_TEXT)
    assert spec.components[0] == ((0, 2, 0, 0), (1, 1, 0, 0), (2, 0, 0, 0))
    assert format_instance(spec) == CASE_A_TEXT
    with pytest.raises(InstanceSyntaxError):
        parse_instance("component: x1")


def test_parse_comments_and_canonical_order():
    text = "# demo\n\nring 3  # three variables\ncomponent: x2, x1*x2, x1^2, x1^3\ncomponent: x3\n"
    spec = parse_instance(text)
    assert format_instance(spec) == "ring 3\ncomponent: x1^2, x2\ncomponent: x3\n"


@pytest.mark.parametrize("text,line", [
    ("ring 2\ncomponent: x1\nbogus", 3),
    ("ring 2\ncomponent: x1*x2", 2),
    ("ring 2\nring 2", 2),
    ("ring two", 1),
    ("ring 2\n\ncomponent: x3", 3),
    ("ring 2\ncomponent: x1^-1", 2),
])
def test_parse_errors_cite_lines(text, line):
    with pytest.raises(InstanceSyntaxError) as info:
        parse_instance(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_parse_redundant():
    text = "ring 2\ncomponent: x1\ncomponent: x1^2\n"
    with pytest.raises(InstanceSyntaxError):
        parse_instance(text)
    assert len(parse_instance(text, allow_redundant=True).components) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5), st.integers(2, 3))
def test_print_parse_round_trip(seed, n, s):
    if s == 3 and n == 2:
        n = 3
    spec = InstanceSpec.from_decomposition(random_instance(RandomParams(seed=seed, n=n, s=s)))
    assert parse_instance(format_instance(spec)) == spec
    assert InstanceSpec(spec.n, spec.components).to_decomposition().ideal == spec.to_decomposition().ideal


# -- sampler ----------------------------------------------------------------

def test_sampler_is_deterministic():
    p = RandomParams(seed=12345, n=5, s=3)
    assert random_instance(p) == random_instance(p)
    assert random_instance(RandomParams(seed="a:1", n=4)) == random_instance(RandomParams(seed="a:1", n=4))


def test_sampler_family_two_by_two():
    ring = RingContext(2)
    primaries = []
    for gens in (g for r in range(1, 4) for g in combinations([(1, 0), (0, 1), (1, 1)], r)):
        q = minimalize(ring, [Monomial(e) for e in gens])
        comp = as_primary(q)
        if comp is not None and comp.radical != ring.all_vars and q not in primaries:
            primaries.append(q)
    family = set()
    for a, b in combinations(primaries, 2):
        dec = PrimaryDecomposition.from_ideals(ring, [a, b], check_irredundant=False)
        if dec.is_irredundant() and a.support | b.support == ring.all_vars:
            family.add(frozenset((a, b)))
    assert frozenset(PrimaryDecomposition.parse(ring, "x1", "x2").ideals) in family
    for seed in range(30):
        dec = random_instance(RandomParams(seed=seed, n=2, s=2, max_exp=1))
        assert frozenset(dec.ideals) in family


def test_sampler_three_components_cover():
    for seed in range(100):
        dec = random_instance(RandomParams(seed=seed, n=3, s=3))
        assert dec.s == 3 and dec.is_irredundant()
        assert all(len(r) < 3 for r in dec.radicals)
        assert frozenset().union(*dec.radicals) == frozenset({0, 1, 2})
        assert all(max(g.exps) <= 2 for q in dec.ideals for g in q.gens)


def test_sampler_params_validated():
    with pytest.raises(ValueError):
        RandomParams(seed=1, n=0)
    with pytest.raises(ValueError):
        RandomParams(seed=1, n=3, s=1)
    with pytest.raises(ValueError):
        RandomParams(seed=1, n=3, s=2, radicals=((0,),))
    with pytest.raises(SamplingExhaustedError):
        random_instance(RandomParams(seed=1, n=2, s=3, max_attempts=50))


def test_sampler_fixed_radicals():
    dec = random_instance(RandomParams(seed=3, n=4, s=3, radicals=((0, 1), (0, 2), (1, 3))))
    assert dec.radicals == [frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 3})]


# -- pipeline ---------------------------------------------------------------

def _dec(text):
    return parse_instance(text).to_decomposition()


def test_verify_examples():
    r = verify(_dec("ring 2\ncomponent: x1\ncomponent: x2"))
    assert r.conjecture_holds and r.status == "ok"
    assert r.depth["oracle"] == 2 and r.sdepth["constructed"] == 2
    r = verify(_dec(CASE_A_TEXT))
    assert r.conjecture_holds and r.depth["oracle"] == r.depth["formula"] == 3
    assert r.depth["case"] == "case-a"
    assert verify(_dec(SPLIT5_TEXT)).conjecture_holds


def test_report_schema_and_witness():
    dec = _dec(SPLIT5_TEXT)
    payload = json.loads(json.dumps(verify(dec).to_json()))
    assert set(payload) == {"instance", "n", "size", "depth", "sdepth", "decomposition",
                            "conjecture_holds", "status", "errors", "timings_ms"}
    assert set(payload["size"]) == {"v", "h", "size"}
    assert {"formula", "oracle", "case"} <= set(payload["depth"])
    assert set(payload["sdepth"]) == {"exact", "constructed"}
    assert payload["sdepth"]["exact"] >= payload["sdepth"]["constructed"]
    # the embedded witness re-checks on its own
    intervals = tuple(StanleyInterval.from_json(d) for d in payload["decomposition"])
    assert validate_decomposition(dec.ideal, StanleyDecomposition(dec.ring, intervals))
    assert parse_instance(payload["instance"]) == InstanceSpec.from_decomposition(dec)


def test_verify_rejects_other_counts():
    with pytest.raises(UnsupportedError):
        verify(_dec("ring 3\ncomponent: x1^2, x2"))


def test_verify_budget_is_recorded():
    r = verify(_dec(SPLIT5_TEXT), budget=4)
    assert r.status == "budget" and not r.conjecture_holds
    assert r.sdepth["exact"] is None


def test_batch_empty():
    summary, records = batch(BatchParams(seed=1, count=0, n=4))
    assert records == [] and summary["count"] == 0 and summary["passed"] == 0


def test_batch_repeatable():
    params = BatchParams(seed=7, count=10, n=4)
    a = batch(params, timings=False)
    b = batch(params, timings=False)
    assert a == b
    assert a[0]["passed"] == 10
    assert "timing_ms" in batch(params)[0]


# -- command line -----------------------------------------------------------

@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"split": SPLIT5_TEXT, "casea": CASE_A_TEXT,
                       "bad": "ring 2\ncomponent: x1*x2\n",
                       "big": "ring 3\ncomponent: x1^9, x2^9\ncomponent: x3^9\n",
                       "one": "ring 3\ncomponent: x1^2, x2\n"}.items():
        path = tmp_path / f"{name}.txt"
        path.write_text(text)
        out[name] = str(path)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_cli_parse(capsys, files):
    code, out = run(capsys, "parse", files["casea"])
    assert code == 0 and out.out == CASE_A_TEXT
    code, out = run(capsys, "parse", "--json", files["casea"])
    assert json.loads(out.out)["n"] == 4
    code, out = run(capsys, "parse", files["bad"])
    assert code == 1 and "line 2" in out.err


def test_cli_size_depth(capsys, files):
    code, out = run(capsys, "size", files["casea"])
    assert code == 0 and json.loads(out.out) == {"v": 2, "h": 4, "size": 1}
    code, out = run(capsys, "depth", files["casea"])
    data = json.loads(out.out)
    assert code == 0 and data["formula"]["depth_ideal"] == data["oracle"]["depth_ideal"] == 3
    code, out = run(capsys, "depth", "--oracle-only", "--field", "fp:2", files["casea"])
    assert code == 0 and set(json.loads(out.out)) == {"oracle"}
    code, out = run(capsys, "depth", "--formula-only", files["casea"])
    assert set(json.loads(out.out)) == {"formula"}


def test_cli_sdepth_decompose(capsys, files):
    code, out = run(capsys, "sdepth", files["casea"])
    assert code == 0 and json.loads(out.out)["sdepth"] == 3
    for method in ("split", "exact"):
        code, out = run(capsys, "decompose", "--method", method, files["split"])
        assert code == 0 and json.loads(out.out)["sdepth"] >= 3


def test_cli_verify(capsys, files, tmp_path):
    target = tmp_path / "report.json"
    code, out = run(capsys, "verify", "--json", str(target), files["split"])
    assert code == 0
    assert json.loads(target.read_text())["conjecture_holds"] is True
    code, out = run(capsys, "verify", "--no-exact", files["one"])
    assert code == 1 and "two or three" in out.err


def test_cli_exit_codes(capsys, files, tmp_path):
    assert run(capsys, "sdepth", "--budget", "10", files["big"])[0] == 2
    assert run(capsys, "verify", "--budget", "10", files["big"])[0] == 2
    assert run(capsys, "size", str(tmp_path / "missing.txt"))[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["batch", "--seed", "1"])
    assert info.value.code == 1


def test_cli_batch(capsys, tmp_path):
    jsonl, figs = tmp_path / "out.jsonl", tmp_path / "figs"
    code, out = run(capsys, "batch", "--seed", "3", "--count", "4", "--n", "4", "--components", "2",
                    "--jsonl", str(jsonl), "--figures", str(figs), "--no-timings")
    summary = json.loads(out.out)
    assert code == 0 and summary["passed"] == 4
    lines = jsonl.read_text().splitlines()
    assert len(lines) == 4 and all("timings_ms" not in json.loads(x) for x in lines)
    assert sorted(p.name for p in figs.iterdir()) == ["cases.png", "sdepth_vs_depth.png", "timings.png"]
    code, out = run(capsys, "batch", "--seed", "3", "--count", "0", "--n", "4")
    assert code == 0 and json.loads(out.out)["count"] == 0


def test_exhaustive_small_rings_verify():
    # every irredundant pair in two variables with exponents <= 2
    ring = RingContext(2)
    pts = [p for p in product(range(3), repeat=2) if any(p)]
    primaries = set()
    for r in range(1, 4):
        for gens in combinations(pts, r):
            q = minimalize(ring, [Monomial(e) for e in gens])
            comp = as_primary(q)
            if comp is not None and comp.radical != ring.all_vars:
                primaries.add(q)
    count = 0
    for a, b in combinations(sorted(primaries, key=str), 2):
        dec = PrimaryDecomposition.from_ideals(ring, [a, b], check_irredundant=False)
        if dec.is_irredundant():
            count += 1
            assert verify(dec).status == "ok"
    assert count > 0
