"""Named reproduction experiments with embedded expected values.

Each experiment states the claim it checks, carries default parameters,
and returns tabular rows plus a pass/fail verdict, so the CLI and the test
suite share one source of truth.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import gallery, grid, optimize, seminorms, sphere2
from .grid import SobolevIndex, TWO_PI

PI = np.pi


@dataclass
class ExperimentResult:
    name: str
    rows: list            # list of dicts, uniform keys
    passed: bool
    summary: str


@dataclass(frozen=True)
class Experiment:
    name: str
    claim: str
    defaults: dict
    runner: object
    slow: bool = False

    def run(self, **overrides):
        params = dict(self.defaults)
        unknown = set(overrides) - set(params)
        if unknown:
            raise KeyError(f"unknown parameters for {self.name}: "
                           f"{sorted(unknown)}")
        params.update(overrides)
        rows, passed, summary = self.runner(**params)
        return ExperimentResult(self.name, rows, passed, summary)


def _parse_floats(value):
    if isinstance(value, str):
        return [float(x) for x in value.split(",")]
    return [float(x) for x in np.atleast_1d(value)]


def _parse_ints(value):
    if isinstance(value, str):
        return [int(x) for x in value.split(",")]
    return [int(x) for x in np.atleast_1d(value)]


# --- S^1 distance formulas ------------------------------------------------

def _run_w11_zigzag(d1, d2):
    pair = gallery.zigzag_pair(int(d1), int(d2))
    value = seminorms.w1p_distance(pair.f, pair.g, 1.0)
    expected = 4.0 * abs(d1 - d2)
    err = abs(value - expected) / expected
    ok = err < 1e-3
    row = {"d1": d1, "d2": d2, "value": value, "expected": expected,
           "rel_err": err, "pass": ok}
    return [row], ok, f"zigzag W11 distance {value:.6f} vs {expected}"


def _run_w1p_formula(p="1,2", d2=1, budget=2000, k=32, seed=0):
    rows, ok = [], True
    for pv in _parse_floats(p):
        rep = optimize.estimate_inf_distance(
            grid.power_map(0), int(d2), SobolevIndex(1.0, pv),
            k=int(k), budget=int(budget), seed=int(seed))
        rel = rep.gap / rep.target
        good = abs(rel) < 0.03
        ok = ok and good
        rows.append({"p": pv, "value": rep.value, "expected": rep.target,
                     "rel_gap": rel, "pass": good})
    return rows, ok, "class-distance optimizer vs 2^{1/p+1} pi^{1/p-1}"


def _run_dist_w11_hausdorff(d="1,2,3", lam="0.1,0.01"):
    rows, ok = [], True
    for dv in _parse_ints(d):
        for lv in _parse_floats(lam):
            f = gallery.ramp_map(dv)  # constant near 0, as deflation needs
            g = gallery.deflate_phase(f, dv, lv)
            value = seminorms.w1p_distance(f, g, 1.0)
            expected = TWO_PI * abs(dv)
            err = abs(value - expected) / expected
            good = err < 1e-3
            ok = ok and good
            rows.append({"d": dv, "lambda": lv, "value": value,
                         "expected": expected, "rel_err": err, "pass": good})
    return rows, ok, "phase-deflation upper bound 2 pi |d|"


def _run_h_half_blaschke(d=2, delta="1e-1,1e-2,1e-3"):
    """|f h_delta - f|^2 equals |h_delta|^2 + o(1) = 4 pi^2 |d| + o(1); the
    multiplier's own squared norm is exactly 4 pi^2 |d| at every delta.  The
    measured approach is from below, so the o(1) term is tracked as an
    absolute deviation."""
    dv = int(d)
    limit = 4.0 * PI ** 2 * abs(dv)
    rows, devs, ok = [], [], True
    for dl in _parse_floats(delta):
        m = max(grid.default_m(),
                1 << int(math.ceil(math.log2(2000.0 / dl))))
        f = grid.power_map(dv, m)
        h = gallery.blaschke_pow(dv, dl, m)
        h_norm_sq = seminorms.h_half_seminorm_sq(h)
        value_sq = seminorms.h_half_seminorm_sq(
            grid.product(f, h).samples - f.samples)
        devs.append(abs(value_sq - limit))
        good = abs(h_norm_sq - limit) < 1e-6 * limit
        ok = ok and good
        rows.append({"delta": dl, "value_sq": value_sq,
                     "multiplier_norm_sq": h_norm_sq, "limit": limit,
                     "abs_deviation": devs[-1]})
    ok = (ok and all(a > b for a, b in zip(devs, devs[1:]))
          and devs[-1] < 0.05 * limit)
    for r in rows:
        r["pass"] = ok
    return rows, ok, "Blaschke-product distance approaching 4 pi^2 |d|"


# --- critical-norm families -----------------------------------------------

def _run_eps_bump_critical(eps="1e-2,1e-3,1e-4", n_dim=1):
    rows, vals = [], []
    for ev in _parse_floats(eps):
        pair = gallery.bump_pair(ev, n_dim=int(n_dim))
        if int(n_dim) == 1:
            value = math.sqrt(seminorms.h_half_seminorm_sq(
                pair.f.samples - pair.g.samples))
        else:
            value = math.sqrt(sphere2.h1_distance(pair.f, pair.g))
        vals.append(value)
        rows.append({"eps": ev, "value": value})
    ok = all(a > b for a, b in zip(vals, vals[1:]))
    for r in rows:
        r["pass"] = ok
    return rows, ok, "critical norm of the bump pair decreasing in eps"


def _run_capacity_decay(eps="1e-2,1e-4,1e-6", eps_extended="1e-10,1e-16",
                        nodes=1500):
    """The log-log cutoff's (1/2, 2) Gagliardo norm decays like
    C/sqrt(ln(1/eps)); strictly decreasing on the base sweep, and the
    extended sweep shows the halving that the slow logarithmic rate only
    reaches near eps ~ 1e-16."""
    base = _parse_floats(eps)
    ext = _parse_floats(eps_extended) if eps_extended else []
    rows, vals = [], []
    for ev in base + ext:
        prof = gallery.capacity_profiles(ev)
        rr = np.geomspace(ev * 1e-3, PI, int(nodes), endpoint=False)
        value = seminorms.gagliardo_even(prof.H(rr), rr, 0.5, 2.0)
        vals.append(value)
        rows.append({"eps": ev, "log_inv_eps": math.log(1.0 / ev),
                     "value": value, "value_sq_times_log":
                         value ** 2 * math.log(1.0 / ev)})
    n = len(base)
    decreasing = all(a > b for a, b in zip(vals, vals[1:]))
    halved = (vals[-1] < 0.5 * vals[0]) if ext else True
    ok = decreasing and halved
    for r, v in zip(rows, vals):
        r["ratio_to_first"] = v / vals[0]
        r["pass"] = ok
    note = (f"decay C/sqrt(log(1/eps)): base-sweep ratio "
            f"{vals[n - 1] / vals[0]:.4f}, full-sweep ratio "
            f"{vals[-1] / vals[0]:.4f}")
    return rows, ok, note


# --- S^2 --------------------------------------------------------------------

def _run_s2_energy(d="1,2", n_phi=128):
    rows, ok = [], True
    for dv in _parse_ints(d):
        f = sphere2.stereographic_power(dv, n_phi=int(n_phi))
        deg = sphere2.degree_kronecker_s2(f)
        en = sphere2.dirichlet_energy(f)
        expected = 8.0 * PI * abs(dv)
        good = abs(deg - dv) < 1e-3 and abs(en - expected) / expected < 0.01
        ok = ok and good
        rows.append({"d": dv, "degree": deg, "energy": en,
                     "expected_energy": expected, "pass": good})
    return rows, ok, "stereographic power: degree d, energy 8 pi |d|"


def _run_s2_vo1(d_list="3,7", n_phi=256):
    ds = _parse_ints(d_list)
    rows, fields, h1s = [], [], []
    for dv in ds:
        pair = sphere2.vo1_pair(dv, 0, n_phi=int(n_phi))
        pf, pg = pair.f, pair.g
        fields.append(pf.values - pg.values)
        h1s.append(sphere2.h1_distance(pf, pg))
        rows.append({"d1": dv, "d2": 0, "h1_distance_sq": h1s[-1]})
    dev = max(float(np.max(np.abs(fields[0] - fb))) for fb in fields[1:])
    h1dev = max(abs(h - h1s[0]) for h in h1s)
    ok = dev < 1e-12 and h1dev < 1e-6
    for r in rows:
        r["field_deviation"] = dev
        r["pass"] = ok
    return rows, ok, "difference field independent of the winding degree"


# --- attainment and lower bounds -------------------------------------------

def _run_attainment(p="1,1.5,2", d1=1, budget=2000, k=32, seed=0):
    rows, ok = [], True
    for pv in _parse_floats(p):
        probe = optimize.attainment_probe(int(d1), pv, budget=int(budget),
                                          k=int(k), seed=int(seed))
        row = {"p": pv, "value": probe["value"], "target": probe["target"]}
        if pv <= 1.0:
            good = abs(probe["value"] - probe["target"]) < 1e-3
            row["verdict"] = "attained"
        elif pv < 2.0:
            good = (probe["gap_rel"] < 0.02
                    and probe["l2_to_minimizer"] < 0.1)
            row["l2_to_minimizer"] = probe["l2_to_minimizer"]
            row["verdict"] = "attained"
        else:
            s0, s1 = probe["stages"]
            grow = s1["max_dpsi"] / s0["max_dpsi"]
            good = (max(s0["gap_rel"], s1["gap_rel"]) < 0.05
                    and grow >= 2.0)
            row["sharpness_growth"] = grow
            row["verdict"] = "concentrating (not attained)"
        ok = ok and good
        row["pass"] = good
        rows.append(row)
    return rows, ok, "attainment trichotomy across p"


def _run_oscillator_lb(n="6,10,16", budget=2000, k=32, seed=0):
    rows, vals = [], []
    for nv in _parse_ints(n):
        f = gallery.oscillator(1, nv)
        rep = optimize.estimate_point_to_class(
            f, 0, SobolevIndex(1.0, 1.0), k=int(k), budget=int(budget),
            restarts=6, seed=int(seed), m_obj=8192)
        vals.append(rep.value)
        rows.append({"n": nv, "value": rep.value, "two_pi": TWO_PI})
    ok = (all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))
          and vals[-1] >= TWO_PI - 0.3)
    for r in rows:
        r["pass"] = ok
    return rows, ok, "oscillator distances approach the 2 pi ceiling"


# --- scaling sweeps ---------------------------------------------------------

def _run_multibump_scaling(d="1,2,4,8", n=32):
    ds = _parse_ints(d)
    rows, slopes = [], []
    for dv in ds:
        h = gallery.multi_bump(dv, 1, n=int(n))
        val = seminorms.h_half_seminorm_sq(h)
        slopes.append(val / dv)
        rows.append({"d": dv, "value_sq": val, "per_degree": val / dv})
    ratio = max(slopes) / min(slopes)
    ok = ratio < 1.25
    for r in rows:
        r["slope_ratio"] = ratio
        r["pass"] = ok
    return rows, ok, f"squared critical norm linear in d (ratio {ratio:.3f})"


def _run_product_shift_scaling(d="1,2,4,8", s=1.0, p=1.0):
    ds = _parse_ints(d)
    s, p = float(s), float(p)
    rows, per = [], []
    for dv in ds:
        pair = gallery.product_shift(dv, 0)
        if s == 1.0:
            val = seminorms.w1p_distance(pair.f, pair.g, p)
            scale = dv if p == 1.0 else dv ** (1.0 / p)
        else:
            val = math.sqrt(seminorms.h_half_seminorm_sq(
                pair.f.samples - pair.g.samples))
            scale = math.sqrt(dv)
        per.append(val / scale)
        rows.append({"d": dv, "value": val, "scaled": val / scale})
    ratio = max(per) / min(per)
    ok = ratio < 1.25 if s == 1.0 and p == 1.0 else ratio < 4.0
    for r in rows:
        r["scaled_ratio"] = ratio
        r["pass"] = ok
    return rows, ok, f"product-shift distance scaling (ratio {ratio:.3f})"


def _run_degree_stability(eps="1e-2,1e-3,1e-4"):
    rows, vals, ok = [], [], True
    for ev in _parse_floats(eps):
        pair = gallery.bump_pair(ev, n_dim=1)
        df = grid.degree_winding(pair.f)
        dg = grid.degree_winding(pair.g)
        val = math.sqrt(seminorms.h_half_seminorm_sq(
            pair.f.samples - pair.g.samples))
        vals.append(val)
        # distance-to-degree-gap ratio: finite means the classes touch
        # without the reported degrees ever merging
        ratio = val ** 2 / (4.0 * PI ** 2 * abs(df - dg))
        good = df == 1 and dg == 0 and math.isfinite(ratio)
        ok = ok and good
        rows.append({"eps": ev, "deg_f": df, "deg_g": dg, "value": val,
                     "gap_ratio": ratio, "pass": good})
    ok = ok and all(a > b for a, b in zip(vals, vals[1:]))
    return rows, ok, "degrees stay (1,0) while the critical distance shrinks"


REGISTRY = {
    e.name: e for e in [
        Experiment(
            "w11-zigzag",
            "zigzag pair realizes the W^{1,1} class distance 4|d1-d2|",
            {"d1": 1, "d2": 0}, _run_w11_zigzag),
        Experiment(
            "w1p-formula",
            "optimizer reproduces 2^{1/p+1} pi^{1/p-1} |d1-d2| within 3%",
            {"p": "1,2", "d2": 1, "budget": 2000, "k": 32, "seed": 0},
            _run_w1p_formula, slow=True),
        Experiment(
            "dist-w11-hausdorff",
            "phase deflation realizes the one-sided bound 2 pi |d|",
            {"d": "1,2,3", "lam": "0.1,0.01"}, _run_dist_w11_hausdorff),
        Experiment(
            "h-half-blaschke",
            "Blaschke multipliers approach the H^{1/2} floor 4 pi^2 |d|",
            {"d": 2, "delta": "1e-1,1e-2,1e-3"}, _run_h_half_blaschke),
        Experiment(
            "eps-bump-critical",
            "bump-pair critical distance strictly decreasing in eps",
            {"eps": "1e-2,1e-3,1e-4", "n_dim": 1}, _run_eps_bump_critical),
        Experiment(
            "capacity-decay",
            "log-log cutoff norm decays like C/sqrt(log(1/eps))",
            {"eps": "1e-2,1e-4,1e-6", "eps_extended": "1e-10,1e-16",
             "nodes": 1500}, _run_capacity_decay),
        Experiment(
            "s2-energy",
            "stereographic powers: degree d, Dirichlet energy 8 pi |d|",
            {"d": "1,2", "n_phi": 128}, _run_s2_energy),
        Experiment(
            "s2-vo1",
            "equator-insertion pair difference independent of degree",
            {"d_list": "3,7", "n_phi": 256}, _run_s2_vo1),
        Experiment(
            "attainment",
            "attained at p<=1 and 1<p<2; concentrating for p>=2",
            {"p": "1,1.5,2", "d1": 1, "budget": 2000, "k": 32, "seed": 0},
            _run_attainment, slow=True),
        Experiment(
            "oscillator-lb",
            "fast-oscillating maps push one-sided distances toward 2 pi",
            {"n": "6,10,16", "budget": 2000, "k": 32, "seed": 0},
            _run_oscillator_lb, slow=True),
        Experiment(
            "multibump-scaling",
            "squared critical norm of multi-bump maps linear in degree",
            {"d": "1,2,4,8", "n": 32}, _run_multibump_scaling),
        Experiment(
            "product-shift-scaling",
            "product-shift pair distance linear in the winding gap",
            {"d": "1,2,4,8", "s": 1.0, "p": 1.0}, _run_product_shift_scaling),
        Experiment(
            "degree-stability",
            "no false degree merging along the bump-pair family",
            {"eps": "1e-2,1e-3,1e-4"}, _run_degree_stability),
    ]
}


def run_experiment(name, **overrides):
    if name not in REGISTRY:
        raise KeyError(f"unknown experiment '{name}'; known: "
                       f"{', '.join(sorted(REGISTRY))}")
    return REGISTRY[name].run(**overrides)


def run_all(include_slow=True):
    results = []
    for name in REGISTRY:
        if not include_slow and REGISTRY[name].slow:
            continue
        results.append(run_experiment(name))
    return results
