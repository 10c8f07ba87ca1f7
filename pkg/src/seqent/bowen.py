"""Separated and spanning counts for finite point clouds, and grid
estimates of the induced growth rate.

Counting conventions, fixed once here and relied on everywhere:

* spanning uses strict balls: a center c covers x when gamma(x, c) < eps;
* separated uses the closed condition gamma(x, y) >= eps for all pairs;
* intrinsic spanning draws centers from the cloud itself, ambient
  spanning from an explicit candidate list.

Exact counting solves a maximum-independent-set (separated) or minimum
set-cover (spanning) instance by branch and bound, feasible for small
clouds only and capped.  Greedy counting scans points in input order; a
greedy maximal separated set is automatically spanning, which pins its
size G between the exact counts at 2*eps and eps.

``bowen_entropy`` fills an (eps, n) grid of counts for a nonincreasing
ladder of scales and an increasing ladder of horizons, reports per-eps
tail statistics of a_n = log(count)/n, and takes the value at the
smallest scale, flagging whether the last two scales agreed within a
tolerance.  It never extrapolates beyond the grid: all counts, per-n
values, tail maxima and tail slopes are returned for inspection.  When
the pairwise matrices do not change across the horizon ladder the rate is
0 exactly (a constant semimetric sequence separates nothing new) and the
estimate says so via the "constant-semimetric" flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np

from .seqset import SeqSetExpr, prefixes

DEFAULT_EXACT_CAP = 24


@dataclass(frozen=True)
class PointCloud:
    """A finite ordered list of abstract points."""

    points: tuple[Any, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("point cloud must be nonempty")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SeqPoint:
    """A finite-horizon window of a sequence of ambient points."""

    coords: tuple[Any, ...]

    @property
    def horizon(self) -> int:
        return len(self.coords)


class DiscreteMetric:
    """0/1 metric on symbols."""

    def dist(self, x: Any, y: Any) -> float:
        return 0.0 if x == y else 1.0

    def pairwise(self, column: np.ndarray) -> np.ndarray:
        return (column[:, None] != column[None, :]).astype(float)


class EuclideanMetric:
    """Absolute difference on scalars, 2-norm on coordinate vectors."""

    def dist(self, x: Any, y: Any) -> float:
        ax, ay = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if ax.ndim == 0:
            return abs(float(ax) - float(ay))
        return float(np.linalg.norm(ax - ay))

    def pairwise(self, column: np.ndarray) -> np.ndarray:
        if column.ndim == 1:
            return np.abs(column[:, None] - column[None, :])
        return np.linalg.norm(column[:, None, :] - column[None, :, :], axis=-1)


def dnp(base: Any, n: int, p: float) -> Callable[[Any, Any], float]:
    """The horizon-n coordinate aggregate of a base metric.

    p = math.inf takes the maximum coordinate distance, finite p >= 1 the
    usual p-sum.  Both coordinate windows must reach the horizon.
    """
    if n < 1:
        raise ValueError("horizon must be >= 1")
    if p != math.inf and p < 1:
        raise ValueError("p must be >= 1 or math.inf")

    def gamma(x: Any, y: Any) -> float:
        cx = x.coords if isinstance(x, SeqPoint) else x
        cy = y.coords if isinstance(y, SeqPoint) else y
        if len(cx) < n or len(cy) < n:
            raise ValueError(f"horizon {n} exceeds window length")
        vals = [base.dist(cx[i], cy[i]) for i in range(n)]
        if p == math.inf:
            return max(vals)
        return sum(v**p for v in vals) ** (1.0 / p)

    return gamma


@dataclass(frozen=True)
class DnpMetric:
    """The full family n -> coordinate aggregate of a base metric."""

    base: Any
    p: float
    increasing: bool = True

    def eval(self, n: int, x: Any, y: Any) -> float:
        return dnp(self.base, n, self.p)(x, y)

    def grid_matrices(
        self, coords: np.ndarray, ns: Sequence[int]
    ) -> Iterator[tuple[int, np.ndarray]]:
        """Pairwise matrices at the given horizons, accumulated stepwise.

        ``coords`` has shape [N, H] for scalar coordinates or [N, H, d]
        for vectors, with H at least max(ns).
        """
        horizon = coords.shape[1]
        if max(ns) > horizon:
            raise ValueError(f"grid horizon {max(ns)} exceeds window {horizon}")
        targets = list(ns)
        acc: np.ndarray | None = None
        gi = 0
        for i in range(max(ns)):
            step = self.base.pairwise(coords[:, i])
            if self.p == math.inf:
                acc = step if acc is None else np.maximum(acc, step)
            else:
                powed = step**self.p
                acc = powed if acc is None else acc + powed
            n = i + 1
            while gi < len(targets) and targets[gi] == n:
                if self.p == math.inf:
                    yield n, acc
                else:
                    yield n, acc ** (1.0 / self.p)
                gi += 1


@dataclass(frozen=True)
class CallableSemimetric:
    """An arbitrary semimetric family given by a function of (n, x, y)."""

    fn: Callable[[int, Any, Any], float]
    increasing: bool = True

    def eval(self, n: int, x: Any, y: Any) -> float:
        return self.fn(n, x, y)


def check_semimetric(
    metric_seq: Any,
    points: Sequence[Any],
    ns: Sequence[int],
    tol: float = 1e-9,
) -> list[str]:
    """Sampled semimetric diagnostics: symmetry, zero diagonal, triangle,
    and monotonicity in n when the family declares itself increasing."""
    problems: list[str] = []
    pts = list(points)
    for n in ns:
        for i, x in enumerate(pts):
            if abs(metric_seq.eval(n, x, x)) > tol:
                problems.append(f"n={n}: eval(x{i}, x{i}) != 0")
            for j in range(i + 1, len(pts)):
                y = pts[j]
                d_xy = metric_seq.eval(n, x, y)
                d_yx = metric_seq.eval(n, y, x)
                if abs(d_xy - d_yx) > tol:
                    problems.append(f"n={n}: asymmetry at ({i}, {j})")
                if d_xy < -tol:
                    problems.append(f"n={n}: negative value at ({i}, {j})")
        for i in range(len(pts)):
            for j in range(len(pts)):
                for t in range(len(pts)):
                    lhs = metric_seq.eval(n, pts[i], pts[j])
                    rhs = metric_seq.eval(n, pts[i], pts[t]) + metric_seq.eval(
                        n, pts[t], pts[j]
                    )
                    if lhs > rhs + tol:
                        problems.append(f"n={n}: triangle fails at ({i}, {t}, {j})")
    if getattr(metric_seq, "increasing", False):
        for n, m in zip(ns, list(ns)[1:]):
            for i, x in enumerate(pts):
                for j in range(i + 1, len(pts)):
                    if metric_seq.eval(m, x, pts[j]) < metric_seq.eval(n, x, pts[j]) - tol:
                        problems.append(f"monotonicity fails at ({i}, {j}), n={n}->{m}")
    return problems


def _as_cloud(cloud: PointCloud | Sequence[Any]) -> PointCloud:
    if isinstance(cloud, PointCloud):
        return cloud
    return PointCloud(tuple(cloud))


def _as_callable(gamma: Any) -> Callable[[Any, Any], float]:
    if callable(gamma):
        return gamma
    return gamma.dist


def _pair_matrix(
    gamma: Callable[[Any, Any], float],
    rows: Sequence[Any],
    cols: Sequence[Any],
) -> np.ndarray:
    out = np.empty((len(rows), len(cols)), dtype=float)
    for i, x in enumerate(rows):
        for j, y in enumerate(cols):
            out[i, j] = gamma(x, y)
    return out


def _mis_size(conflicts: list[int], universe: int) -> int:
    best = 0

    def expand(mask: int, size: int) -> None:
        nonlocal best
        if size + mask.bit_count() <= best:
            return
        if mask == 0:
            if size > best:
                best = size
            return
        m = mask
        pick, deg = -1, -1
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            d = (conflicts[v] & mask).bit_count()
            if d > deg:
                pick, deg = v, d
        if deg == 0:
            total = size + mask.bit_count()
            if total > best:
                best = total
            return
        vbit = 1 << pick
        expand(mask & ~(conflicts[pick] | vbit), size + 1)
        expand(mask & ~vbit, size)

    expand(universe, 0)
    return best


def _separated_exact_from_matrix(dist: np.ndarray, eps: float, cap: int) -> int:
    n = dist.shape[0]
    if n > cap:
        raise ValueError(f"exact separated counting capped at {cap} points, got {n}")
    conflicts = [0] * n
    close = dist < eps
    for i in range(n):
        row = 0
        for j in range(n):
            if i != j and close[i, j]:
                row |= 1 << j
        conflicts[i] = row
    return _mis_size(conflicts, (1 << n) - 1)


def _separated_greedy_from_matrix(dist: np.ndarray, eps: float) -> int:
    n = dist.shape[0]
    alive = np.ones(n, dtype=bool)
    count = 0
    for i in range(n):
        if alive[i]:
            count += 1
            alive &= dist[i] >= eps
    return count


def _min_cover_size(cover_masks: list[int], n_points: int) -> int | None:
    full = (1 << n_points) - 1
    union_all = 0
    for m in cover_masks:
        union_all |= m
    if union_all != full:
        return None

    uncovered = full
    greedy = 0
    while uncovered:
        gain, choice = 0, -1
        for si, m in enumerate(cover_masks):
            g = (m & uncovered).bit_count()
            if g > gain:
                gain, choice = g, si
        uncovered &= ~cover_masks[choice]
        greedy += 1
    best = greedy

    covers_of: list[list[int]] = [[] for _ in range(n_points)]
    for si, m in enumerate(cover_masks):
        mm = m
        while mm:
            v = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            covers_of[v].append(si)

    def dfs(uncov: int, used: int) -> None:
        nonlocal best
        if uncov == 0:
            if used < best:
                best = used
            return
        if used + 1 >= best:
            return
        maxcov = max((m & uncov).bit_count() for m in cover_masks)
        if used + -(-uncov.bit_count() // maxcov) >= best:
            return
        mm = uncov
        pv, pc = -1, 1 << 30
        while mm:
            v = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            c = len(covers_of[v])
            if c < pc:
                pv, pc = v, c
        for s in covers_of[pv]:
            dfs(uncov & ~cover_masks[s], used + 1)

    dfs(full, 0)
    return best


def _greedy_cover_size(cover_masks: list[int], n_points: int) -> int | None:
    full = (1 << n_points) - 1
    union_all = 0
    for m in cover_masks:
        union_all |= m
    if union_all != full:
        return None
    uncovered = full
    used = 0
    while uncovered:
        gain, choice = 0, -1
        for si, m in enumerate(cover_masks):
            g = (m & uncovered).bit_count()
            if g > gain:
                gain, choice = g, si
        uncovered &= ~cover_masks[choice]
        used += 1
    return used


@dataclass(frozen=True)
class SeparatedCount:
    """Result of a separated-point count at one scale.

    In greedy mode the value G of the maximal set found in input order is
    sandwiched by the exact counts: exact(sandwich[0]) <= G <=
    exact(sandwich[1]), i.e. the pair holds the scales (2*eps, eps).
    """

    value: int
    eps: float
    mode: str
    sandwich: tuple[float, float] | None = None


@dataclass(frozen=True)
class SpanningCount:
    """Result of a spanning-center count at one scale.

    Greedy cover sizes are upper bounds on the exact minimum, recorded by
    ``upper_bound``.
    """

    value: int
    eps: float
    mode: str
    centers: str
    upper_bound: bool


def count_separated(
    cloud: PointCloud | Sequence[Any],
    gamma: Any,
    eps: float,
    mode: str = "exact",
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> SeparatedCount:
    """Largest (exact) or maximal-in-order (greedy) eps-separated subset."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    cloud, gamma = _as_cloud(cloud), _as_callable(gamma)
    dist = _pair_matrix(gamma, cloud.points, cloud.points)
    if mode == "exact":
        value = _separated_exact_from_matrix(dist, eps, exact_cap)
        return SeparatedCount(value, eps, "exact")
    if mode == "greedy":
        value = _separated_greedy_from_matrix(dist, eps)
        return SeparatedCount(value, eps, "greedy", sandwich=(2 * eps, eps))
    raise ValueError(f"unknown mode {mode!r}")


def count_spanning(
    cloud: PointCloud | Sequence[Any],
    gamma: Any,
    eps: float,
    candidates: Sequence[Any] | None = None,
    mode: str = "exact",
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> SpanningCount:
    """Fewest strict eps-balls covering the cloud.

    Centers come from the cloud itself unless an ambient candidate list
    is given.  Raises when the candidates cannot cover at this scale.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    cloud, gamma = _as_cloud(cloud), _as_callable(gamma)
    intrinsic = candidates is None
    centers = cloud.points if intrinsic else tuple(candidates)
    dist = _pair_matrix(gamma, cloud.points, centers)
    n_points = len(cloud.points)
    if mode == "exact" and (n_points > exact_cap or len(centers) > 2 * exact_cap):
        raise ValueError(
            f"exact spanning counting capped at {exact_cap} points, got {n_points}"
        )
    masks = []
    for j in range(len(centers)):
        m = 0
        for i in range(n_points):
            if dist[i, j] < eps:
                m |= 1 << i
        masks.append(m)
    if mode == "exact":
        value = _min_cover_size(masks, n_points)
    elif mode == "greedy":
        value = _greedy_cover_size(masks, n_points)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if value is None:
        raise ValueError(f"candidates cannot cover the cloud at eps={eps}")
    return SpanningCount(
        value, eps, mode, "intrinsic" if intrinsic else "ambient", mode == "greedy"
    )


@dataclass(frozen=True)
class BowenGridConfig:
    """Grid shape and counting policy for ``bowen_entropy``.

    ``eps`` is a descending ladder of scales; when omitted a geometric
    ladder 2**-1 .. 2**-eps_count of the first-horizon cloud diameter is
    used.  ``n_grid`` must be strictly increasing.
    """

    eps: tuple[float, ...] | None = None
    eps_count: int = 10
    n_grid: tuple[int, ...] = tuple(range(1, 15))
    counter: str = "separated"
    mode: str = "greedy"
    window: int | None = None
    stabilization_tol: float = 0.05
    exact_cap: int = DEFAULT_EXACT_CAP


@dataclass(frozen=True)
class BowenEstimate:
    """Count grid, per-eps tail statistics, and the reported value.

    ``counts[i][j]`` is the count at eps[i], n_grid[j]; ``a`` holds
    log(count)/n; ``tails`` the per-eps maxima of a_n over the window;
    ``tail_slopes`` the per-eps least-squares slopes of log count against
    n over the same window.  ``stabilized`` records whether the last two
    scales agreed within ``tol``; the value is taken at the smallest
    scale either way, so a False flag means the grid had not settled.
    """

    value: float
    counter: str
    mode: str
    eps: tuple[float, ...]
    ns: tuple[int, ...]
    counts: tuple[tuple[int, ...], ...]
    a: tuple[tuple[float, ...], ...]
    tails: tuple[float, ...]
    tail_slopes: tuple[float, ...]
    window: tuple[int, ...]
    stabilized: bool
    eps_used: float
    tol: float
    flags: tuple[str, ...] = ()

    def rows(self) -> Iterator[tuple[float, int, int, float]]:
        for i, e in enumerate(self.eps):
            for j, n in enumerate(self.ns):
                yield e, n, self.counts[i][j], self.a[i][j]


def _tail_slope(ns: Sequence[int], counts: Sequence[int]) -> float:
    pts = [(float(n), math.log(c)) for n, c in zip(ns, counts)]
    if len(pts) < 2:
        return 0.0
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    if sxx == 0:
        return 0.0
    return sum((x - mx) * (y - my) for x, y in pts) / sxx


def _count_from_matrix(
    dist: np.ndarray, eps: float, counter: str, mode: str, cap: int
) -> int:
    if counter == "separated":
        if mode == "exact":
            return _separated_exact_from_matrix(dist, eps, cap)
        return _separated_greedy_from_matrix(dist, eps)
    if counter == "spanning":
        n_points = dist.shape[0]
        if mode == "exact" and n_points > cap:
            raise ValueError(f"exact spanning capped at {cap} points")
        masks = []
        close = dist < eps
        for j in range(n_points):
            m = 0
            for i in range(n_points):
                if close[i, j]:
                    m |= 1 << i
            masks.append(m)
        size = (
            _min_cover_size(masks, n_points)
            if mode == "exact"
            else _greedy_cover_size(masks, n_points)
        )
        if size is None:
            raise AssertionError("intrinsic centers always cover")
        return size
    raise ValueError(f"unknown counter {counter!r}")


def _cloud_coords(points: Sequence[Any]) -> np.ndarray:
    raw = [p.coords if isinstance(p, SeqPoint) else p for p in points]
    return np.asarray(raw, dtype=float)


def bowen_entropy(
    cloud: PointCloud | Callable[[int], PointCloud],
    metric_seq: Any,
    cfg: BowenGridConfig | None = None,
) -> BowenEstimate:
    """Fill the (eps, n) count grid and report the smallest-scale tail.

    ``cloud`` is either one fixed point cloud (counted at every horizon)
    or a function n -> cloud.  ``metric_seq`` is a DnpMetric (fast array
    path) or any object with eval(n, x, y).
    """
    cfg = cfg or BowenGridConfig()
    ns = tuple(cfg.n_grid)
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
        raise ValueError("n_grid must be strictly increasing horizons >= 1")

    fixed_cloud = cloud if isinstance(cloud, PointCloud) else None

    def matrices() -> Iterator[tuple[int, np.ndarray]]:
        if fixed_cloud is not None and isinstance(metric_seq, DnpMetric):
            coords = _cloud_coords(fixed_cloud.points)
            yield from metric_seq.grid_matrices(coords, ns)
            return
        for n in ns:
            pts = (fixed_cloud or cloud(n)).points
            gamma = lambda x, y: metric_seq.eval(n, x, y)  # noqa: E731
            yield n, _pair_matrix(gamma, pts, pts)

    eps_ladder = cfg.eps
    first_mat: np.ndarray | None = None
    last_mat: np.ndarray | None = None
    columns: list[list[int]] = []
    flags: list[str] = []

    for n, mat in matrices():
        if first_mat is None:
            first_mat = mat.copy()
            if eps_ladder is None:
                diam = float(mat.max())
                if diam <= 0:
                    diam = 1.0
                    flags.append("zero-diameter-fallback")
                eps_ladder = tuple(diam * 2.0**-j for j in range(1, cfg.eps_count + 1))
        if n == ns[-1]:
            last_mat = mat.copy()
        column = [
            _count_from_matrix(mat, e, cfg.counter, cfg.mode, cfg.exact_cap)
            for e in eps_ladder
        ]
        columns.append(column)

    assert eps_ladder is not None and first_mat is not None and last_mat is not None
    counts = tuple(
        tuple(columns[j][i] for j in range(len(ns))) for i in range(len(eps_ladder))
    )
    a = tuple(
        tuple(math.log(c) / n for n, c in zip(ns, row)) for row in counts
    )

    w = cfg.window if cfg.window is not None else -(-len(ns) // 3)
    w = max(1, min(w, len(ns)))
    window_ns = ns[-w:]

    constant = (
        fixed_cloud is not None
        and first_mat.shape == last_mat.shape
        and bool(np.array_equal(first_mat, last_mat))
        and len(ns) > 1
    )
    if constant:
        flags.append("constant-semimetric")
        tails = tuple(0.0 for _ in eps_ladder)
        slopes = tuple(0.0 for _ in eps_ladder)
    else:
        tails = tuple(max(row[-w:]) for row in a)
        slopes = tuple(_tail_slope(window_ns, row[-w:]) for row in counts)

    if len(eps_ladder) >= 2:
        stabilized = abs(tails[-1] - tails[-2]) < cfg.stabilization_tol
    else:
        stabilized = True

    return BowenEstimate(
        value=tails[-1],
        counter=cfg.counter,
        mode=cfg.mode,
        eps=tuple(eps_ladder),
        ns=ns,
        counts=counts,
        a=a,
        tails=tails,
        tail_slopes=slopes,
        window=window_ns,
        stabilized=stabilized,
        eps_used=eps_ladder[-1],
        tol=cfg.stabilization_tol,
        flags=tuple(flags),
    )


class OrbitEvaluationError(RuntimeError):
    """Raised when forward orbits cannot be evaluated at some seeds."""

    def __init__(self, failures: list[tuple[int, str]]):
        self.failures = failures
        shown = "; ".join(f"seed {i}: {msg}" for i, msg in failures[:5])
        more = "" if len(failures) <= 5 else f" (+{len(failures) - 5} more)"
        super().__init__(f"orbit evaluation failed: {shown}{more}")


def orbit_cloud(
    T: Callable[[Any], Any], seeds: Iterable[Any], horizon: int, label: str = ""
) -> PointCloud:
    """Forward-orbit windows (x, Tx, ..., T^(horizon-1) x) of the seeds."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    failures: list[tuple[int, str]] = []
    pts: list[SeqPoint] = []
    for idx, x in enumerate(seeds):
        try:
            orb = []
            cur = x
            for _ in range(horizon):
                orb.append(cur)
                cur = T(cur)
            pts.append(SeqPoint(tuple(orb)))
        except Exception as exc:  # noqa: BLE001 - reported per seed
            failures.append((idx, repr(exc)))
    if failures:
        raise OrbitEvaluationError(failures)
    return PointCloud(tuple(pts), label=label)


def map_bowen_entropy(
    T: Callable[[Any], Any],
    seeds: Sequence[Any],
    base: Any,
    p: float,
    cfg: BowenGridConfig | None = None,
) -> BowenEstimate:
    """Grid estimate for a map: orbits of the seeds under the horizon-n
    coordinate aggregate of the base metric."""
    cfg = cfg or BowenGridConfig()
    horizon = max(cfg.n_grid)
    cloud = orbit_cloud(T, seeds, horizon)
    return bowen_entropy(cloud, DnpMetric(base, p), cfg)


def seqset_cloud(
    expr: SeqSetExpr, horizon: int, budget: int | None = None
) -> PointCloud:
    """One point per distinct horizon-length opening of a sequence set.

    The points are the openings themselves in lexicographic order, which
    makes all downstream greedy counts deterministic.
    """
    ps = prefixes(expr, horizon, budget)
    return PointCloud(tuple(ps.sorted_words()), label="seqset")
