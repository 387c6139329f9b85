"""Explicit extremal and approximating circle-map families.

Every piecewise-linear construction carries its exact analytic phase and
derivative so quadrature can integrate segment-by-segment between kinks.
"""

from dataclasses import dataclass

import numpy as np

from . import grid
from .errors import IndexOutOfRange, NotLocallyConstant, Overcrowded
from .grid import TWO_PI, CircleMap, phase_model

PI = np.pi


@dataclass(frozen=True)
class GalleryPair:
    f: CircleMap
    g: CircleMap
    params: dict
    claim: str  # tag of the expected distance formula


def smoothstep(t):
    """C^infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.clip(t, 1e-300, None)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.clip(1.0 - t, 1e-300, None)), 0.0)
    return a / (a + b)


def cap_k(t):
    """Smooth non-increasing cap: 1 for t <= 1/4, 0 for t >= 3/4."""
    return 1.0 - smoothstep((np.asarray(t, dtype=float) - 0.25) / 0.5)


def _wrap(x):
    """Wrap angles to (-pi, pi]."""
    return PI - np.mod(PI - np.asarray(x, dtype=float), TWO_PI)


# ---------------------------------------------------------------------------
# zigzag pair: |f' - g'| integrates to exactly 4|d1 - d2| in W^{1,1}

def zigzag_pair(d1, d2, m=None):
    """The zigzag pair (f, g) in classes (d1, d2) with W^{1,1} gap 4|d1-d2|.

    f has constant slope L = |d1-d2| + 1 on an initial arc; g traces the same
    arc as a zigzag of |d1-d2| triangles (g = f on the rising teeth, g = conj f
    on the falling ones), then both coincide up to the constant 2*pi*(d1-d2).
    """
    d1, d2 = int(d1), int(d2)
    if d1 == d2:
        raise ValueError("zigzag pair needs d1 != d2")
    if d1 < d2:
        p = zigzag_pair(d2, d1, m)
        return GalleryPair(p.g, p.f, {"d1": d1, "d2": d2}, p.claim)
    if d1 <= 0:
        p = zigzag_pair(-d1, -d2, m)
        return GalleryPair(grid.conjugate(p.f), grid.conjugate(p.g),
                           {"d1": d1, "d2": d2}, p.claim)

    d = d1 - d2
    L = d + 1
    tstar = 2.0 * d * PI / L

    def phi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < tstar, L * t, L * d2 * t + 2.0 * (d1 - L * d2) * PI)

    def dphi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < tstar, float(L), float(L * d2))

    period = TWO_PI / L

    def psi(t):
        t = np.asarray(t, dtype=float)
        u = np.mod(t, period)
        saw = L * np.minimum(u, period - u)
        return np.where(t < tstar, saw, phi(t) - 2.0 * d * PI)

    def dpsi(t):
        t = np.asarray(t, dtype=float)
        u = np.mod(t, period)
        saw = np.where(u < 0.5 * period, float(L), float(-L))
        return np.where(t < tstar, saw, float(L * d2))

    kinks = np.arange(1, 2 * d + 1) * (PI / L)
    pf = phase_model(phi, dphi, [tstar], d1)
    pg = phase_model(psi, dpsi, np.append(kinks, tstar), d2)
    return GalleryPair(grid.from_phase(pf, m), grid.from_phase(pg, m),
                       {"d1": d1, "d2": d2}, "w11_zigzag_4d")


# ---------------------------------------------------------------------------
# phase deflation: unwind d turns on a short arc where f is constant

def deflate_phase(f, d, lam):
    """g = f * exp(-2*pi*d*i*min(theta,lam)/lam): deg g = deg f - d.

    Requires f constant on [0, lam]; there |f' - g'| = 2*pi*|d|/lam, so the
    W^{1,1} gap is exactly 2*pi*|d|.
    """
    d = int(d)
    if not (0.0 < lam < TWO_PI):
        raise ValueError("need 0 < lam < 2*pi")
    on_arc = f.samples[f.theta <= lam]
    if on_arc.size and np.max(np.abs(on_arc - on_arc[0])) > 1e-9:
        raise NotLocallyConstant("f varies on [0, lam]")

    def unwind(t):
        t = np.asarray(t, dtype=float)
        return -2.0 * d * PI * np.minimum(t, lam) / lam

    def dunwind(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < lam, -2.0 * d * PI / lam, 0.0)

    twist = grid.from_phase(phase_model(unwind, dunwind, [lam], -d), f.m)
    return grid.product(f, twist)


def ramp_map(d, gap=0.5, m=None):
    """Smooth degree-d map constant (= 1) on [0, gap] and near 2*pi."""
    d = int(d)
    width = TWO_PI - 2.0 * gap

    def phi(t):
        return 2.0 * PI * d * smoothstep((np.asarray(t, float) - gap) / width)

    def dphi(t):
        t = np.asarray(t, dtype=float)
        h = 1e-7
        return (phi(t + h) - phi(t - h)) / (2.0 * h)

    return grid.from_phase(phase_model(phi, dphi, winding=d), m)


# ---------------------------------------------------------------------------
# oscillator: n^2 sawtooth pairs with slopes d1*n and -d1*(n-2)

def oscillator(d1, n, m=None):
    """Degree-d1 map whose phase zigzags over n^2 interval pairs.

    Each pair has length 2*pi/n^2, split in equal halves of slope d1*n and
    -d1*(n-2); the total variation of the phase is 2*(n-1)*pi*d1 while the
    net increment stays 2*pi*d1.
    """
    d1, n = int(d1), int(n)
    if n < 3:
        raise ValueError("need n >= 3")
    pair = TWO_PI / n ** 2
    half = 0.5 * pair
    up, down = d1 * n, -d1 * (n - 2)

    def phi(t):
        t = np.asarray(t, dtype=float)
        j = np.floor(t / pair)
        u = t - j * pair
        base = j * (up * half + down * half)  # = j * 2*pi*d1/n^2
        return base + np.where(u < half, up * u, up * half + down * (u - half))

    def dphi(t):
        u = np.mod(np.asarray(t, dtype=float), pair)
        return np.where(u < half, float(up), float(down))

    kinks = np.arange(1, 2 * n ** 2) * half
    return grid.from_phase(phase_model(phi, dphi, kinks, d1), m)


# ---------------------------------------------------------------------------
# the T/S phase reparametrizations and the attainment pair

def t_phase(theta):
    """Phase of T(e^{i theta}) = e^{i pi sin(theta/2)}."""
    return PI * np.sin(np.asarray(theta, dtype=float) / 2.0)


def s_phase(theta):
    """Phase of the inverse reparametrization S(e^{i theta}) = e^{2i arcsin(theta/pi)}
    (theta taken in (-pi, pi])."""
    return 2.0 * np.arcsin(_wrap(theta) / PI)


def compose_t(f):
    """Post-compose a CircleMap with T."""
    ph = grid.lift(f)
    return grid.from_samples(np.exp(1j * t_phase(ph.values)))


def compose_s(f):
    """Post-compose a CircleMap with S (left inverse of compose_t)."""
    ph = grid.lift(f)
    return grid.from_samples(np.exp(1j * s_phase(ph.values)))


def attainment_pair(d1, p, m=None):
    """The extremal pair attaining the W^{1,p} class distance for d2 = -d1.

    f is the half-phase square root of w = S(e^{i d theta}) with d = 2*d1,
    g = conj(f); then f' - g' has constant modulus 2d/pi, so the distance
    equals 2^{1/p+1} pi^{1/p-1} * |d1 - d2| on the nose.
    """
    d1 = int(d1)
    if not (1.0 < p < 2.0):
        raise IndexOutOfRange("attainment pair exists only for 1 < p < 2")
    if d1 == 0:
        raise ValueError("need d1 != 0")
    d = 2 * d1

    def phi(t):
        dt = np.asarray(t, dtype=float) * d
        k = np.round(dt / TWO_PI)
        s = dt - TWO_PI * k
        return np.arcsin(s / PI) + PI * k

    def dphi(t):
        dt = np.asarray(t, dtype=float) * d
        k = np.round(dt / TWO_PI)
        s = dt - TWO_PI * k
        with np.errstate(divide="ignore", invalid="ignore"):
            return d / (PI * np.sqrt(np.maximum(1.0 - (s / PI) ** 2, 0.0)))

    sings = (2.0 * np.arange(abs(d)) + 1.0) * PI / abs(d)
    pf = phase_model(phi, dphi, sings, d1)
    f = grid.from_phase(pf, m)
    return GalleryPair(f, grid.conjugate(f),
                       {"d1": d1, "d2": -d1, "p": p}, "w1p_formula")


# ---------------------------------------------------------------------------
# Blaschke powers

def blaschke_pow(d, delta, m=None):
    """h(z) = ((z - (1-delta)) / ((1-delta) z - 1))^{-d}, degree -d.

    Evaluated by phase accumulation (lift the Moebius factor, multiply the
    phase by -d) so small delta and large d cannot cancel catastrophically.
    """
    d = int(d)
    if not (0.0 < delta < 1.0):
        raise ValueError("need 0 < delta < 1")
    m = grid.default_m() if m is None else m
    z = np.exp(1j * grid.nodes(m))
    a = 1.0 - delta
    w = (z - a) / (a * z - 1.0)
    ph = grid.lift(grid.from_samples(w))
    return grid.from_samples(np.exp(-1j * d * ph.values))


# ---------------------------------------------------------------------------
# capacity profiles and the critical bump pair

@dataclass(frozen=True)
class CapacityProfiles:
    """Radial profiles driving the critical-norm bump constructions.

    K: smooth cap (1 below 1/4, 0 above 3/4); H: log-log cutoff equal to 1
    on r <= eps and 0 on r >= sqrt(eps); F, G: bump phases with F = G on
    r < eps and F + G = pi on r >= eps.
    """

    eps: float

    def K(self, t):
        return cap_k(t)

    def H(self, r):
        r = np.asarray(r, dtype=float)
        eps = self.eps
        out = np.zeros_like(r)
        out[r <= eps] = 1.0
        mid = (r > eps) & (r < np.sqrt(eps))
        if mid.any():
            rr = r[mid]
            arg = 0.25 - np.log(np.log(1.0 / rr) / np.log(1.0 / eps)) / (2.0 * np.log(2.0))
            out[mid] = cap_k(arg)
        return out

    def F(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.eps,
                        PI * (1.0 - cap_k(r / self.eps)) / 2.0,
                        PI * (1.0 - self.H(r) / 2.0))

    def G(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.eps, self.F(r), PI * self.H(r) / 2.0)


def capacity_profiles(eps):
    if not (0.0 < eps < np.exp(-2.0)):
        raise IndexOutOfRange("need 0 < eps < exp(-2)")
    return CapacityProfiles(float(eps))


def _bump_phase_1d(profile_fn, theta):
    """Phase -pi/2 + sign(x) * profile(|x|) with x the arc offset from pi."""
    x = np.asarray(theta, dtype=float) - PI
    return -PI / 2.0 + np.sign(x) * profile_fn(np.abs(x))


def bump_pair(eps, n_dim=1, m=None, n_phi=None):
    """The bump pair (f, g) with degrees (1, 0) whose difference lives in the
    last coordinate only and shrinks in the critical norm as eps -> 0."""
    prof = capacity_profiles(eps)
    if n_dim == 1:
        m = (1 << 20) if m is None else m
        f = grid.from_samples(np.exp(1j * _bump_phase_1d(prof.F, grid.nodes(m))))
        g = grid.from_samples(np.exp(1j * _bump_phase_1d(prof.G, grid.nodes(m))))
        return GalleryPair(f, g, {"eps": eps, "n_dim": 1}, "critical_bump")
    if n_dim == 2:
        from . import sphere2

        return sphere2.bump_pair_s2(prof, n_phi=n_phi)
    raise ValueError("n_dim must be 1 or 2")


# ---------------------------------------------------------------------------
# multi-bump, dense-onto, product-shift

def _single_bump_phase(x, r):
    """Degree-one bump: phase rises 0 -> 2*pi across [-r, r], flat outside."""
    return TWO_PI * smoothstep((np.asarray(x, dtype=float) + r) / (2.0 * r))


def multi_bump(d, n_dim=1, n=32, m=None, n_phi=None):
    """Degree-d map equal to a constant outside d disjoint balls of radius 1/n."""
    d, n = int(d), int(n)
    if d == 0:
        raise ValueError("need d != 0")
    if n_dim == 2:
        from . import sphere2

        return sphere2.multi_bump_s2(d, n, n_phi=n_phi)
    if n_dim != 1:
        raise ValueError("n_dim must be 1 or 2")
    k = abs(d)
    r = 1.0 / n
    spacing = TWO_PI / k
    if 2.0 * r >= spacing:
        raise Overcrowded(f"{k} bumps of radius {r} do not fit disjointly")
    centers = (np.arange(k) + 0.5) * spacing
    sgn = 1 if d > 0 else -1

    def phi(t):
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for c in centers:
            total += _single_bump_phase(_wrap(t - c), r)
        return sgn * total

    def dphi(t):
        t = np.asarray(t, dtype=float)
        h = 1e-7
        return (phi(t + h) - phi(t - h)) / (2.0 * h)

    # the summed phase has harmless 2*pi jumps antipodal to each center;
    # declare them so segment quadrature never straddles one
    jumps = np.mod(centers + PI, TWO_PI)
    return grid.from_phase(phase_model(phi, dphi, jumps, d), m)


def dense_onto(d1, n, m=None):
    """Degree-d1 map that covers the whole circle inside every arc of radius 1/n."""
    d1, n = int(d1), int(n)
    j = 4 * n  # oscillation count: one full period fits in each 2/n window
    amp = PI + 1.0
    if m is None:
        rate = abs(d1) + amp * j
        m = 1 << int(np.ceil(np.log2(TWO_PI * rate / 0.005)))

    def phi(t):
        t = np.asarray(t, dtype=float)
        return d1 * t + amp * np.sin(j * t)

    def dphi(t):
        return d1 + amp * j * np.cos(j * np.asarray(t, dtype=float))

    return grid.from_phase(phase_model(phi, dphi, winding=d1), m)


def product_shift(d1, d2, m=None):
    """Pair f = h^{d1-d2} * g with h active on the right half-circle and
    g active on the left, so f - g = (h^{d1-d2} - 1) * g is one-sided."""
    d1, d2 = int(d1), int(d2)

    def rise(t):  # 0 -> 1 across the right half-circle, flat on the left
        return smoothstep((_wrap(t) + PI / 2.0) / PI)

    def h_phi(t):
        t = np.asarray(t, dtype=float)
        return TWO_PI * (rise(t) + np.floor((t + PI) / TWO_PI))

    def g_phi(t):
        t = np.asarray(t, dtype=float)
        return TWO_PI * d2 * smoothstep((t - PI / 2.0) / PI)

    def num_deriv(fn):
        def df(t, h=1e-7):
            return (fn(np.asarray(t, float) + h) - fn(np.asarray(t, float) - h)) / (2 * h)

        return df

    h = grid.from_phase(phase_model(h_phi, num_deriv(h_phi), winding=1), m)
    g = grid.from_phase(phase_model(g_phi, num_deriv(g_phi), winding=d2), m)
    f = grid.product(grid.power(h, d1 - d2), g)
    return GalleryPair(f, g, {"d1": d1, "d2": d2}, "product_shift")


# ---------------------------------------------------------------------------
# attainability diagnostics

def plateau_pair(d1, d2, a=PI, m=None):
    """Pair with phi rising to 2*pi*d1 on [0, a] then flat, psi continuing to
    2*pi*d2; attains the one-sided W^{1,1} distance 2*pi*(d2 - d1)."""
    d1, d2 = int(d1), int(d2)
    if not 0 < d1 < d2:
        raise ValueError("plateau pair needs 0 < d1 < d2")
    slope1 = 2.0 * PI * d1 / a
    slope2 = 2.0 * PI * (d2 - d1) / (TWO_PI - a)

    def phi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < a, slope1 * t, 2.0 * PI * d1)

    def dphi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < a, slope1, 0.0)

    def psi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < a, slope1 * t, 2.0 * PI * d1 + slope2 * (t - a))

    def dpsi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < a, slope1, slope2)

    return GalleryPair(grid.from_phase(phase_model(phi, dphi, [a], d1), m),
                       grid.from_phase(phase_model(psi, dpsi, [a], d2), m),
                       {"d1": d1, "d2": d2, "a": a}, "plateau_2pid")


def wedge_density(f):
    """f wedge f' on the grid (equals the phase derivative for circle maps)."""
    if f.phase is not None:
        t = f.theta + 0.5 * TWO_PI / f.m
        return f.phase.deriv(t)
    df = grid.spectral_derivative(f.samples)
    return np.imag(np.conj(f.samples) * df)


def attainability_witnesses(d1, d2, m=None):
    """Diagnostics for when the one-sided W^{1,1} distance is attained.

    Reports the range of f wedge f' for the canonical representative, whether
    the sign condition d1 * (f wedge f') >= 0 holds, and the measured plateau
    pair distance (should equal 2*pi*(d2-d1) for 0 < d1 < d2).
    """
    from . import seminorms

    f = grid.power_map(d1, m)
    w = wedge_density(f)
    pair = plateau_pair(d1, d2, m=m) if 0 < d1 < d2 else None
    out = {
        "wedge_min": float(np.min(w)),
        "wedge_max": float(np.max(w)),
        "wedge_sign_ok": bool(np.all(d1 * w >= -1e-12)),
    }
    if pair is not None:
        out["plateau_distance"] = seminorms.w1p_distance(pair.f, pair.g, 1.0)
        out["plateau_expected"] = 2.0 * PI * (d2 - d1)
    return out


# ---------------------------------------------------------------------------
# randomized smooth representatives (test/optimizer seeds) and the registry

def random_map(d, rng, kmax=8, amp=0.5, m=None):
    """Random smooth degree-d map: phase d*theta plus a low-mode trig series."""
    coef = amp * rng.standard_normal(2 * kmax) / (1 + np.arange(2 * kmax) // 2) ** 2
    ks = np.arange(1, kmax + 1)

    def phi(t):
        t = np.asarray(t, dtype=float)
        acc = d * t
        for i, k in enumerate(ks):
            acc = acc + coef[2 * i] * np.cos(k * t) + coef[2 * i + 1] * np.sin(k * t)
        return acc

    def dphi(t):
        t = np.asarray(t, dtype=float)
        acc = float(d) + 0.0 * t
        for i, k in enumerate(ks):
            acc = acc + k * (-coef[2 * i] * np.sin(k * t)
                             + coef[2 * i + 1] * np.cos(k * t))
        return acc

    return grid.from_phase(phase_model(phi, dphi, winding=d), m)


def build_map(name, m=None, **kw):
    """Gallery registry for single maps, addressable by name + parameters."""
    from . import sphere2

    k = {key: val for key, val in kw.items()}
    if name == "power":
        return grid.power_map(int(k["d"]), m)
    if name == "blaschke":
        return blaschke_pow(int(k["d"]), float(k["delta"]), m)
    if name == "oscillator":
        return oscillator(int(k["d1"]), int(k["n"]), m)
    if name == "multibump":
        return multi_bump(int(k["d"]), int(k.get("ndim", 1)), int(k.get("n", 32)), m)
    if name == "denseonto":
        return dense_onto(int(k["d1"]), int(k["n"]), m)
    if name == "ramp":
        return ramp_map(int(k["d"]), float(k.get("gap", 0.5)), m)
    if name == "deflate":
        f = ramp_map(int(k["d1"]), float(k.get("gap", 0.5)), m)
        return deflate_phase(f, int(k["d"]), float(k.get("lam", 0.1)))
    if name == "suspension":
        return sphere2.suspension(sphere2.default_suspension(
            int(k.get("k", 1)), int(k.get("dh", 1)),
            n_phi=int(k["nphi"]) if "nphi" in k else None))
    if name == "stereo":
        return sphere2.stereographic_power(int(k["d"]),
                                           n_phi=int(k["nphi"]) if "nphi" in k else None)
    raise KeyError(f"unknown map name {name!r}")


def build_pair(name, m=None, **kw):
    """Gallery registry for pairs."""
    k = dict(kw)
    if name == "zigzag":
        return zigzag_pair(int(k["d1"]), int(k["d2"]), m)
    if name == "attainment":
        return attainment_pair(int(k["d1"]), float(k.get("p", 1.5)), m)
    if name == "bump":
        return bump_pair(float(k["eps"]), int(k.get("ndim", 1)), m)
    if name == "productshift":
        return product_shift(int(k["d1"]), int(k["d2"]), m)
    if name == "plateau":
        return plateau_pair(int(k["d1"]), int(k["d2"]), m=m)
    if name == "vo1":
        from . import sphere2

        return sphere2.vo1_pair(int(k["d1"]), int(k["d2"]),
                                n_phi=int(k["nphi"]) if "nphi" in k else None)
    raise KeyError(f"unknown pair name {name!r}")
