"""Subsets of the complex plane and stability of polynomials relative to them.

Boundaries are fuzzy on purpose: every region carries ``band`` and a point
within ``band`` of the boundary is reported as ``Membership.BAND`` instead of
being forced inside or outside.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .polycore import ComplexPoly, derivative, evaluate, roots, shift_argument

DEFAULT_BAND = 1e-9


class Membership(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BAND = "band"


class SamplerExhausted(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# convex sets (complements of these are the unbounded regions)


@dataclass(frozen=True)
class ConvexDisk:
    center: complex
    radius: float

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) <= self.radius

    def boundary_distance(self, z):
        return np.abs(np.abs(np.asarray(z) - self.center) - self.radius)

    def anchor(self):
        return complex(self.center), max(self.radius, 1e-12)

    def scaled(self, tau):
        return ConvexDisk(self.center * tau, self.radius * tau)

    def to_json(self):
        return {"kind": "disk", "center": _cj(self.center), "radius": self.radius}


@dataclass(frozen=True)
class HalfPlane:
    """The closed half-plane {z : Re(conj(normal) z) <= offset}, |normal| = 1."""

    normal: complex
    offset: float

    def __post_init__(self):
        n = complex(self.normal)
        if n == 0:
            raise ValueError("half-plane normal must be nonzero")
        object.__setattr__(self, "normal", n / abs(n))

    def _signed(self, z):
        return np.real(np.conj(self.normal) * np.asarray(z)) - self.offset

    def contains(self, z):
        return self._signed(z) <= 0

    def boundary_distance(self, z):
        return np.abs(self._signed(z))

    def anchor(self):
        return complex(self.normal * self.offset), max(1.0, abs(self.offset))

    def scaled(self, tau):
        return HalfPlane(self.normal, self.offset * tau)

    def to_json(self):
        return {"kind": "halfplane", "normal": _cj(self.normal), "offset": self.offset}


def _hull(points):
    pts = sorted(set((float(p.real), float(p.imag)) for p in points))
    if len(pts) <= 2:
        return [complex(*p) for p in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [complex(*p) for p in lower[:-1] + upper[:-1]]


def _segment_distance(z, a, b):
    d = b - a
    if d == 0:
        return np.abs(z - a)
    t = np.clip(np.real((z - a) * np.conj(d)) / abs(d) ** 2, 0.0, 1.0)
    return np.abs(z - (a + t * d))


@dataclass(frozen=True)
class PolygonHull:
    """Convex hull of finitely many vertices (segments and points allowed)."""

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(_hull([complex(v) for v in self.vertices])))
        if not self.vertices:
            raise ValueError("polygon hull needs at least one vertex")

    def _edge_distance(self, z):
        v = self.vertices
        if len(v) == 1:
            return np.abs(z - v[0])
        edges = [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]
        return np.min([_segment_distance(z, a, b) for a, b in edges], axis=0)

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        v = self.vertices
        if len(v) < 3:
            return self._edge_distance(z) <= 0
        inside = np.ones(z.shape, dtype=bool)
        for i in range(len(v)):
            a, b = v[i], v[(i + 1) % len(v)]
            inside &= np.imag(np.conj(b - a) * (z - a)) >= 0
        return inside

    def boundary_distance(self, z):
        return self._edge_distance(np.asarray(z, dtype=complex))

    def anchor(self):
        v = np.array(self.vertices)
        c = complex(v.mean())
        return c, max(float(np.max(np.abs(v - c))), 1e-12)

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    def scaled(self, tau):
        return PolygonHull(tuple(x * tau for x in self.vertices))

    def to_json(self):
        return {"kind": "polygon", "vertices": [_cj(x) for x in self.vertices]}


ConvexSet = ConvexDisk | HalfPlane | PolygonHull


# ---------------------------------------------------------------------------
# regions


def _cj(z):
    z = complex(z)
    return [z.real, z.imag]


def _classify(dist, inside, band, closed):
    """Membership from boundary distance and exact-side test."""
    dist = np.asarray(dist, dtype=float)
    inside = np.asarray(inside, dtype=bool)
    out = np.where(inside, Membership.INSIDE, Membership.OUTSIDE).astype(object)
    if band > 0:
        out[dist <= band] = Membership.BAND
    else:
        on = dist == 0
        out[on] = Membership.INSIDE if closed else Membership.OUTSIDE
    return out


class _RegionBase:
    band: float

    def membership(self, z):
        raise NotImplementedError

    def member(self, z) -> Membership:
        return self.membership(np.asarray([z]))[0]

    def contains(self, z) -> bool:
        return self.member(z) is Membership.INSIDE

    def with_band(self, band: float):
        return replace(self, band=band)


@dataclass(frozen=True)
class Disk(_RegionBase):
    center: complex = 0j
    radius: float = 1.0
    closed: bool = False
    band: float = DEFAULT_BAND

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    def membership(self, z):
        r = np.abs(np.asarray(z, dtype=complex) - self.center)
        return _classify(np.abs(r - self.radius), r < self.radius, self.band, self.closed)

    def boundary_distance(self, z):
        return np.abs(np.abs(np.asarray(z) - self.center) - self.radius)

    def bounded(self):
        return True

    def interior_nonempty(self):
        return True

    def sup_modulus(self):
        return abs(self.center) + self.radius

    def extent(self):
        return complex(self.center), self.radius

    def interior_point(self):
        return complex(self.center), self.radius

    def scaled(self, tau):
        return Disk(self.center * tau, self.radius * tau, self.closed, self.band * tau)

    def to_json(self):
        return {"kind": "disk", "center": _cj(self.center), "radius": self.radius,
                "closed": self.closed, "boundary_band": self.band}


@dataclass(frozen=True)
class Annulus(_RegionBase):
    center: complex = 0j
    r_inner: float = 0.5
    r_outer: float = 1.0
    closed_inner: bool = False
    closed_outer: bool = False
    band: float = DEFAULT_BAND

    def __post_init__(self):
        if not (self.r_inner >= 0 and self.r_outer > self.r_inner):
            raise ValueError("annulus needs 0 <= r_inner < r_outer")

    def membership(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z - self.center)
        d_in = np.abs(r - self.r_inner)
        d_out = np.abs(r - self.r_outer)
        inside = (r > self.r_inner) & (r < self.r_outer)
        out = _classify(np.minimum(d_in, d_out), inside, self.band, False)
        if self.band == 0:
            out[(d_in == 0) & self.closed_inner] = Membership.INSIDE
            out[(d_out == 0) & self.closed_outer] = Membership.INSIDE
        return out

    def boundary_distance(self, z):
        r = np.abs(np.asarray(z) - self.center)
        return np.minimum(np.abs(r - self.r_inner), np.abs(r - self.r_outer))

    def bounded(self):
        return True

    def interior_nonempty(self):
        return True

    def sup_modulus(self):
        return abs(self.center) + self.r_outer

    def extent(self):
        return complex(self.center), self.r_outer

    def interior_point(self):
        mid = 0.5 * (self.r_inner + self.r_outer)
        return complex(self.center) + mid, 0.5 * (self.r_outer - self.r_inner)

    def scaled(self, tau):
        return Annulus(self.center * tau, self.r_inner * tau, self.r_outer * tau,
                       self.closed_inner, self.closed_outer, self.band * tau)

    def to_json(self):
        return {"kind": "annulus", "center": _cj(self.center), "r_inner": self.r_inner,
                "r_outer": self.r_outer, "closed_inner": self.closed_inner,
                "closed_outer": self.closed_outer, "boundary_band": self.band}


@dataclass(frozen=True)
class PuncturedDisk(_RegionBase):
    center: complex = 0j
    radius: float = 1.0
    closed: bool = False
    band: float = DEFAULT_BAND

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    def membership(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z - self.center)
        dist = np.minimum(r, np.abs(r - self.radius))
        out = _classify(dist, (r > 0) & (r < self.radius), self.band, False)
        if self.band == 0 and self.closed:
            out[r == self.radius] = Membership.INSIDE
        return out

    def boundary_distance(self, z):
        r = np.abs(np.asarray(z) - self.center)
        return np.minimum(r, np.abs(r - self.radius))

    def bounded(self):
        return True

    def interior_nonempty(self):
        return True

    def sup_modulus(self):
        return abs(self.center) + self.radius

    def extent(self):
        return complex(self.center), self.radius

    def interior_point(self):
        return complex(self.center) + 0.5 * self.radius, 0.25 * self.radius

    def scaled(self, tau):
        return PuncturedDisk(self.center * tau, self.radius * tau, self.closed, self.band * tau)

    def to_json(self):
        return {"kind": "punctured_disk", "center": _cj(self.center), "radius": self.radius,
                "closed": self.closed, "boundary_band": self.band}


@dataclass(frozen=True)
class ConvexComplement(_RegionBase):
    """The open set C minus K for a closed convex K."""

    hull: ConvexSet = ConvexDisk(0j, 1.0)
    band: float = DEFAULT_BAND

    def membership(self, z):
        z = np.asarray(z, dtype=complex)
        return _classify(self.hull.boundary_distance(z), ~self.hull.contains(z), self.band, False)

    def boundary_distance(self, z):
        return self.hull.boundary_distance(np.asarray(z, dtype=complex))

    def bounded(self):
        return False

    def interior_nonempty(self):
        return True

    def sup_modulus(self):
        return np.inf

    def extent(self):
        c, s = self.hull.anchor()
        return c, s

    def interior_point(self):
        c, s = self.hull.anchor()
        if isinstance(self.hull, HalfPlane):
            p = c + 2.0 * s * self.hull.normal
        else:
            p = c + 3.0 * s
        return complex(p), float(self.hull.boundary_distance(p))

    def scaled(self, tau):
        return ConvexComplement(self.hull.scaled(tau), self.band * tau)

    def to_json(self):
        return {"kind": "convex_complement", "hull": self.hull.to_json(),
                "boundary_band": self.band}


@dataclass(frozen=True)
class Sampled(_RegionBase):
    """Union of disks of radius ``spacing`` about finitely many probe points.

    ``spacing = 0`` gives a bare point set with empty interior.
    """

    points: tuple = ()
    spacing: float = 0.0
    band: float = DEFAULT_BAND

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))

    def _dist(self, z):
        z = np.asarray(z, dtype=complex)
        if not self.points:
            return np.full(z.shape, np.inf)
        pts = np.array(self.points)
        return np.min(np.abs(z[..., None] - pts), axis=-1)

    def membership(self, z):
        d = self._dist(z)
        return _classify(np.abs(d - self.spacing), d < self.spacing, self.band, True)

    def boundary_distance(self, z):
        return np.abs(self._dist(z) - self.spacing)

    def bounded(self):
        return True

    def interior_nonempty(self):
        return self.spacing > 0 and len(self.points) >= 1

    def sup_modulus(self):
        if not self.points:
            return 0.0
        return float(np.max(np.abs(self.points))) + self.spacing

    def extent(self):
        pts = np.array(self.points) if self.points else np.zeros(1)
        c = complex(pts.mean())
        return c, float(np.max(np.abs(pts - c))) + self.spacing

    def interior_point(self):
        if not self.interior_nonempty():
            raise ValueError("sampled region has empty interior")
        return self.points[0], self.spacing

    def scaled(self, tau):
        return Sampled(tuple(p * tau for p in self.points), self.spacing * tau, self.band * tau)

    def to_json(self):
        return {"kind": "sampled", "points": [_cj(p) for p in self.points],
                "spacing": self.spacing, "boundary_band": self.band}


Region = Disk | Annulus | PuncturedDisk | ConvexComplement | Sampled


def unit_disk(closed: bool = False, band: float = DEFAULT_BAND) -> Disk:
    return Disk(0j, 1.0, closed, band)


def scale_region(omega: Region, tau: float) -> Region:
    """The pointwise image tau*omega; the band scales with the set."""
    if not tau > 0:
        raise ValueError("scale factor must be positive")
    return omega.scaled(tau)


# ---------------------------------------------------------------------------
# JSON


def _pc(v):
    return complex(float(v[0]), float(v[1]))


def convex_from_json(doc: dict) -> ConvexSet:
    kind = doc["kind"]
    if kind == "disk":
        return ConvexDisk(_pc(doc["center"]), float(doc["radius"]))
    if kind == "halfplane":
        return HalfPlane(_pc(doc["normal"]), float(doc["offset"]))
    if kind == "polygon":
        return PolygonHull(tuple(_pc(v) for v in doc["vertices"]))
    raise ValueError(f"unknown convex set kind {kind!r}")


def region_from_json(doc: dict) -> Region:
    try:
        kind = doc["kind"]
        band = float(doc.get("boundary_band", DEFAULT_BAND))
        if kind == "disk":
            return Disk(_pc(doc["center"]), float(doc["radius"]), bool(doc.get("closed", False)), band)
        if kind == "annulus":
            return Annulus(_pc(doc["center"]), float(doc["r_inner"]), float(doc["r_outer"]),
                           bool(doc.get("closed_inner", False)), bool(doc.get("closed_outer", False)),
                           band)
        if kind == "punctured_disk":
            return PuncturedDisk(_pc(doc["center"]), float(doc["radius"]),
                                 bool(doc.get("closed", False)), band)
        if kind == "convex_complement":
            return ConvexComplement(convex_from_json(doc["hull"]), band)
        if kind == "sampled":
            return Sampled(tuple(_pc(p) for p in doc["points"]), float(doc.get("spacing", 0.0)), band)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed region JSON: {exc}") from exc
    raise ValueError(f"unknown region kind {kind!r}")


# ---------------------------------------------------------------------------
# stability


class StabilityStatus(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    BORDERLINE = "borderline"
    ZERO_POLY = "zero_poly"


@dataclass(frozen=True)
class Stability:
    status: StabilityStatus
    witness: Optional[complex] = None

    @property
    def stable(self) -> bool:
        return self.status is StabilityStatus.STABLE

    @property
    def unstable(self) -> bool:
        return self.status is StabilityStatus.UNSTABLE

    def to_json(self):
        doc = {"verdict": self.status.value}
        if self.witness is not None:
            doc["witness"] = _cj(self.witness)
        return doc


def is_stable(p: ComplexPoly, omega: Region) -> Stability:
    """Decide whether p has no zeros in omega, surfacing boundary cases."""
    # exact trimming, as in roots(): small leading coefficients still carry roots
    c = np.trim_zeros(np.asarray(p.coeffs, dtype=complex), "b")
    if c.size == 0:
        return Stability(StabilityStatus.ZERO_POLY)
    if c.size == 1:
        return Stability(StabilityStatus.STABLE)
    rs = roots(ComplexPoly(c)).all_roots()
    mem = omega.membership(rs)
    inside = [r for r, m in zip(rs, mem) if m is Membership.INSIDE]
    if inside:
        # deepest root is the most convincing witness
        dist = omega.boundary_distance(np.array(inside))
        return Stability(StabilityStatus.UNSTABLE, complex(inside[int(np.argmax(dist))]))
    band = [r for r, m in zip(rs, mem) if m is Membership.BAND]
    if band:
        return Stability(StabilityStatus.BORDERLINE, complex(band[0]))
    return Stability(StabilityStatus.STABLE)


def _complement_candidates(omega: Region, rng: np.random.Generator, size: int) -> np.ndarray:
    c, s = omega.extent()
    if isinstance(omega, ConvexComplement):
        c, s = omega.hull.anchor()
        half = 2.0 * s
        return c + rng.uniform(-half, half, size) + 1j * rng.uniform(-half, half, size)
    # box of side 4*diam around the region, plus a log-uniform exterior ring
    diam = 2.0 * s
    half = 2.0 * diam
    n_ring = size // 4
    box = c + rng.uniform(-half, half, size - n_ring) + 1j * rng.uniform(-half, half, size - n_ring)
    rad = half * np.exp(rng.uniform(0.0, np.log(10.0), n_ring))
    ring = c + rad * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n_ring))
    return np.concatenate([box, ring])


def sample_complement(omega: Region, count: int, rng: np.random.Generator,
                      margin: Optional[float] = None, budget: int = 200) -> np.ndarray:
    """Points outside omega at distance > margin from its boundary."""
    if margin is None:
        margin = 2.0 * omega.band
    got = []
    for _ in range(budget):
        cand = _complement_candidates(omega, rng, max(4 * count, 64))
        mem = omega.membership(cand)
        ok = np.array([m is Membership.OUTSIDE for m in mem]) & (omega.boundary_distance(cand) > margin)
        got.extend(cand[ok].tolist())
        if len(got) >= count:
            # keep draw order so results depend only on the seed
            return np.array(got[:count], dtype=complex)
    raise SamplerExhausted(f"could not sample {count} points outside {omega!r}")


def random_stable_poly(omega: Region, degree: int, rng_seed=None, margin: Optional[float] = None,
                       rng: Optional[np.random.Generator] = None) -> ComplexPoly:
    """Random polynomial whose roots all lie outside omega (with margin)."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    rng = rng if rng is not None else np.random.default_rng(rng_seed)
    lead = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    if degree == 0:
        return ComplexPoly([lead])
    rs = sample_complement(omega, degree, rng, margin)
    return ComplexPoly.from_roots(rs, lead)


def sample_region(omega: Region, density: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Deterministic grid of interior points (plus optional random extras)."""
    c, s = omega.extent()
    if isinstance(omega, ConvexComplement):
        s = 4.0 * s
    xs = np.linspace(-s, s, density)
    g = (c + xs[:, None] + 1j * xs[None, :]).ravel()
    if isinstance(omega, Sampled):
        g = np.concatenate([g, np.array(omega.points, dtype=complex)])
    if rng is not None:
        g = np.concatenate([g, c + s * (rng.uniform(-1, 1, density * density)
                                        + 1j * rng.uniform(-1, 1, density * density))])
    mem = omega.membership(g)
    return g[np.array([m is Membership.INSIDE for m in mem], dtype=bool)]


# ---------------------------------------------------------------------------
# phi(source) inside target


class MapStatus(enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    SAMPLED_ONLY = "sampled_only"


@dataclass(frozen=True)
class MapsInto:
    status: MapStatus
    witness: Optional[complex] = None
    detail: str = ""

    def to_json(self):
        doc = {"verdict": self.status.value, "detail": self.detail}
        if self.witness is not None:
            doc["witness"] = _cj(self.witness)
        return doc


def _source_circles(source: Region):
    """Boundary circles (center, radius) whose closure bounds the source, or None."""
    if isinstance(source, Disk):
        return [(source.center, source.radius)]
    if isinstance(source, PuncturedDisk):
        return [(source.center, source.radius)]
    if isinstance(source, Annulus):
        circles = [(source.center, source.r_outer)]
        if source.r_inner > 0:
            circles.append((source.center, source.r_inner))
        return circles
    return None


def _circle_extrema(phi: ComplexPoly, c0: complex, r: float, target_center: complex, K: int):
    """(min, max, pad) of |phi - target_center| on a circle, with a Lipschitz pad.

    Writing g(theta) = phi(c0 + r e^{i theta}) - target_center = sum a_k e^{ik theta},
    |g'(theta)| <= sum k|a_k|, so any point is within pi/K * sum k|a_k| of a grid value.
    """
    a = shift_argument(phi, c0, r).coeffs.copy()
    a[0] -= target_center
    theta = 2 * np.pi * np.arange(K) / K
    vals = np.abs(evaluate(ComplexPoly(a), np.exp(1j * theta)))
    pad = np.pi / K * float(np.sum(np.arange(a.size) * np.abs(a)))
    l1 = float(np.sum(np.abs(a)))
    return float(vals.min()), float(vals.max()), pad, l1


def maps_into(phi: ComplexPoly, source: Region, target: Region, grid_density: int = 64) -> MapsInto:
    """Check phi(source) inside target.

    Refutation is by sampling source points. Certification uses the maximum
    (and, for annuli, minimum) modulus principle on the boundary circles of a
    disk-like source, with either the coefficient l1 bound or a circle grid
    plus a derivative pad. Anything else is SAMPLED_ONLY.
    """
    pts = sample_region(source, grid_density)
    circles = _source_circles(source)
    if circles is not None:
        K = 8 * grid_density
        for c0, r in circles:
            th = 2 * np.pi * (np.arange(K) + 0.5) / K
            pts = np.concatenate([pts, c0 + r * (1 - 1e-9) * np.exp(1j * th)])
        pts = pts[np.array([m is Membership.INSIDE for m in source.membership(pts)], dtype=bool)]
    if pts.size:
        imgs = evaluate(phi, pts)
        tm = target.membership(imgs)
        bad = [i for i, m in enumerate(tm) if m is Membership.OUTSIDE]
        if bad:
            far = max(bad, key=lambda i: float(target.boundary_distance(imgs[i])))
            return MapsInto(MapStatus.REFUTED, complex(pts[far]), "sampled source point maps outside target")

    if circles is None or not isinstance(target, (Disk, Annulus, PuncturedDisk)):
        return MapsInto(MapStatus.SAMPLED_ONLY, detail="no certification route for this geometry")
    if not source.interior_nonempty():
        return MapsInto(MapStatus.SAMPLED_ONLY, detail="source interior empty")

    tc = target.center
    if isinstance(target, Disk):
        r_lo, r_hi = None, target.radius
        lo_closed, hi_closed = False, target.closed
    elif isinstance(target, Annulus):
        r_lo, r_hi = target.r_inner, target.r_outer
        lo_closed, hi_closed = target.closed_inner, target.closed_outer
    else:
        r_lo, r_hi = 0.0, target.radius
        lo_closed, hi_closed = False, target.closed

    source_closed = getattr(source, "closed", False) or getattr(source, "closed_outer", False)
    nonconst = phi.trimmed().degree >= 1
    # open source + nonconstant phi: interior values stay strictly below the boundary sup
    strict_hi = (source_closed or not nonconst) and not hi_closed
    strict_lo = (source_closed or not nonconst) and not lo_closed
    eps = 1e-12 * max(1.0, r_hi)

    K = max(1024, 16 * grid_density)
    outer = circles[0]
    # punctured disks use the full disk: the puncture cannot raise the sup
    mins, grid_ok = [], True
    l1_ok = False
    for c0, r in circles:
        lo, hi, pad, l1 = _circle_extrema(phi, c0, r, tc, K)
        mins.append(lo - pad)
        grid_ok = grid_ok and (hi + pad < r_hi)
        if (c0, r) == outer:
            # the l1 bound covers the whole closed disk of the outer circle
            l1_ok = (l1 < r_hi) if strict_hi else (l1 <= r_hi + eps)
    certified_hi = grid_ok or l1_ok
    if not certified_hi:
        return MapsInto(MapStatus.SAMPLED_ONLY, detail="upper modulus bound not certified")
    if r_lo is None:
        return MapsInto(MapStatus.CERTIFIED, detail="maximum modulus on source boundary")

    # lower bound needs phi - center zero-free on the closed source hull
    shifted = phi - tc
    if shifted.trimmed().degree >= 1:
        zs = roots(shifted).all_roots()
        fill = Disk(outer[0], outer[1], True, 0.0)
        if isinstance(source, Annulus):
            fill = Annulus(source.center, source.r_inner, source.r_outer, True, True, 0.0)
        near = fill.boundary_distance(zs)
        mem = fill.membership(zs)
        if any(m is not Membership.OUTSIDE for m in mem) or np.any(near < 1e-6):
            return MapsInto(MapStatus.SAMPLED_ONLY, detail="phi attains the target center near the source")
    low = min(mins)
    ok_lo = low > r_lo if strict_lo else low >= r_lo
    if not ok_lo:
        return MapsInto(MapStatus.SAMPLED_ONLY, detail="lower modulus bound not certified")
    return MapsInto(MapStatus.CERTIFIED, detail="max/min modulus on source boundary")


def phi_lipschitz_disk(phi: ComplexPoly, center: complex, radius: float) -> float:
    """Upper bound for |phi'| on a closed disk, from shifted coefficients."""
    return float(np.sum(np.abs(shift_argument(derivative(phi), center, radius).coeffs)))
