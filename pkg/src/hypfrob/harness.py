"""Experiment orchestration: configuration, cached data, the invariant
verification suite, and report emission.

Reports are deterministic: CSV files carry a single timestamp comment line
(ignored by byte comparisons), JSON files carry no volatile fields at all.
Exit status contract: 0 ok, 1 hard invariant failure, 2 configuration
error, 3 enumeration budget refusal.
"""

import json
import math
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import cache as cachemod
from . import ensemble as ens
from . import linstat, rmt
from .charsym import jacobi_symbol
from .exact import fraction_str
from .lfunction import (
    FunctionalEquationError,
    RootMagnitudeError,
    complete_l,
    dirichlet_coefficients,
    eigenphases,
    explicit_trace_sum,
    point_count_direct,
    traces_explicit,
    traces_from_eigenphases,
    traces_from_lpoly,
)
from .polyfield import get_prime_table, poly

CACHE_ENV = "HYPFROB_CACHE_DIR"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str = "verify"
    q: int = 3
    g: int = 1
    g_max: int = None
    N: int = None
    specs: list = field(default_factory=list)
    tf: str = "triangular:3"
    moments: int = 3
    k: int = None
    l: int = 1
    degrees: tuple = (1, 2)
    alpha_max: int = 4
    beta_max: int = None
    workers: int = 1
    cache_dir: str = None
    out_dir: str = "reports"
    fmt: str = "csv"
    budget: int = ens.DEFAULT_BUDGET
    dump: bool = False
    path: str = None
    custom_tf: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cache_dir is None:
            self.cache_dir = os.environ.get(CACHE_ENV, ".hypfrob-cache")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def g_range(self):
        hi = self.g_max if self.g_max is not None else self.g
        if hi < self.g:
            raise ConfigError("g-max below g")
        return range(self.g, hi + 1)


def load_config_file(path):
    """Flat key = value lines; 'tf.NAME = spec' defines custom test functions."""
    values, custom = {}, {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key.startswith("tf."):
                custom[key[3:]] = val
            else:
                values[key.replace("-", "_")] = val
    return values, custom


# -- cached ensemble data ---------------------------------------------------------

def load_or_compute_data(q, g, N, cache_dir=None, workers=1, budget=ens.DEFAULT_BUDGET,
                         write=True):
    """Trace data from a warm cache when possible, else computed and cached.

    Returns (EnsembleData, from_cache).  Cached files holding deeper traces
    are sliced down; mismatched versions are rebuilt with a fresh write.
    """
    path = cachemod.find_trace_cache(cache_dir, q, g, N)
    if path:
        try:
            cq, cg, cN, coeffs, s = cachemod.read_trace_cache(path)
            if (cq, cg) == (q, g) and cN >= N:
                spec = ens.EnsembleSpec(q, g)
                if len(coeffs) == spec.count:
                    qpow = q ** np.arange(2 * g + 1, dtype=np.int64)
                    codes = coeffs[:, : 2 * g + 1].astype(np.int64) @ qpow
                    data = ens.EnsembleData(q=q, g=g, N=cN, codes=codes,
                                            coeffs=coeffs, s=s)
                    return data.sliced(N), True
        except cachemod.CacheFormatError:
            pass  # stale or foreign file: rebuild below
    data = ens.compute_ensemble_data(q, g, N, workers=workers, budget=budget)
    if write and cache_dir:
        cachemod.write_trace_cache(cachemod.trace_cache_path(cache_dir, q, g, N), data)
    return data, False


# -- invariant verification suite ---------------------------------------------------

@dataclass
class VerifyResult:
    q: int
    g: int
    curves: int
    checks: list  # (name, ok, detail)
    elapsed: float

    @property
    def ok(self):
        return all(ok for _name, ok, _detail in self.checks)

    def lines(self):
        out = []
        for name, ok, detail in self.checks:
            mark = "ok" if ok else "FAIL"
            out.append(f"[{mark}] {name}: {detail}")
        return out


def _reflect_phase(t):
    """Negate an angle within (-pi, pi]; -pi wraps back to pi."""
    r = -t
    if r <= -math.pi:
        r += 2 * math.pi
    return r


def _battery(q):
    """Per-modulus functionals, total on all monic arguments, for the
    dual-average identity check."""
    x = poly((0, 1), q)
    x1 = poly((1, 1), q)
    table = get_prime_table(q, 3)
    return [
        ("one", lambda M: 1),
        ("chi(x)", lambda M: jacobi_symbol(M, x, q)),
        ("chi(x+1)", lambda M: jacobi_symbol(M, x1, q)),
        ("chi(x)^2", lambda M: jacobi_symbol(M, x, q) ** 2),
        ("chi(x(x+1))", lambda M: jacobi_symbol(M, x, q) * jacobi_symbol(M, x1, q)),
        ("t1", lambda M: explicit_trace_sum(M, q, 1, table)),
        ("t2", lambda M: explicit_trace_sum(M, q, 2, table)),
        ("t1^2", lambda M: explicit_trace_sum(M, q, 1, table) ** 2),
        ("t1*t2", lambda M: (explicit_trace_sum(M, q, 1, table)
                             * explicit_trace_sum(M, q, 2, table))),
        ("t3", lambda M: explicit_trace_sum(M, q, 3, table)),
    ]


def verify_suite(q, g, workers=1, cache_dir=None, budget=ens.DEFAULT_BUDGET,
                 exhaustive=None):
    """Structural invariants over the full ensemble.

    Exhaustive per-curve checks (full coefficient enumeration, dual trace
    paths, eigenphases, point counts) run for every curve at small genus
    and on a deterministic stride sample at larger genus.
    """
    t0 = time.perf_counter()
    spec = ens.EnsembleSpec(q, g)
    spec.check_budget(budget)
    N = 2 * g + 2
    checks = []
    data, from_cache = load_or_compute_data(q, g, N, cache_dir=cache_dir,
                                            workers=workers, budget=budget)
    checks.append(("cardinality", data.count == spec.count,
                   f"{data.count} curves vs (q-1)q^(2g) = {spec.count}"))
    if from_cache:
        fresh = ens.compute_ensemble_data(q, g, N, workers=workers, budget=budget)
        same = (np.array_equal(fresh.s, data.s)
                and np.array_equal(fresh.coeffs, data.coeffs))
        checks.append(("cache consistency", same,
                       "cached traces match a fresh computation" if same
                       else "cached traces DIFFER from a fresh computation"))

    if exhaustive is None:
        exhaustive = g <= 2
    stride = 1 if exhaustive else max(1, data.count // 400)
    sample = range(0, data.count, stride)
    fe_ok = rh_ok = dual_ok = engine_ok = pair_ok = recon_ok = True
    bound_ok = weil_ok = split_ok = points_ok = True
    detail = {}
    explicit_N = N if g <= 2 else min(N, 6)
    point_N = 3 if g <= 2 else 2
    table = get_prime_table(q, explicit_N)
    for i in sample:
        curve = data.curve(i)
        strategy = "enumerate" if exhaustive else "funceq"
        try:
            ld = complete_l(curve, dirichlet_coefficients(curve, strategy=strategy))
        except FunctionalEquationError as exc:
            fe_ok = False
            detail.setdefault("fe", str(exc))
            continue
        if ld.Astar[2 * g] != q ** g:
            fe_ok = False
            detail.setdefault("fe", f"leading coefficient != q^g at curve {i}")
        s_newton = traces_from_lpoly(ld, N)
        if list(data.s[i]) != s_newton:
            engine_ok = False
            detail.setdefault("engine", f"engine trace mismatch at curve {i}")
        s_explicit = traces_explicit(curve, explicit_N, table)
        if s_explicit != s_newton[:explicit_N]:
            dual_ok = False
            detail.setdefault("dual", f"explicit vs Newton mismatch at curve {i}")
        try:
            theta = eigenphases(ld, q)
        except RootMagnitudeError as exc:
            rh_ok = False
            detail.setdefault("rh", str(exc))
            continue
        if len(theta) != 2 * g:
            pair_ok = False
        neg = sorted(_reflect_phase(t) for t in theta)
        if any(abs(a - b) > 1e-8 for a, b in zip(sorted(theta), neg)):
            pair_ok = False
            detail.setdefault("pair", f"phases not negation-closed at curve {i}")
        recon = traces_from_eigenphases(theta, q, N)
        if any(abs(r - sn) > 1e-9 * q ** (n / 2)
               for n, (r, sn) in enumerate(zip(recon, s_newton), start=1)):
            recon_ok = False
            detail.setdefault("recon", f"phase-trace reconstruction off at curve {i}")
        for n in range(1, N + 1):
            if s_newton[n - 1] ** 2 > 4 * g * g * q ** n:
                bound_ok = False
                detail.setdefault("bound", f"|s_{n}| > 2g q^(n/2) at curve {i}")
        for n in range(1, explicit_N + 1):
            dec = ens.term_decomposition(curve, n, table)
            if dec.prime_part + dec.square_part + dec.higher_part != -s_newton[n - 1]:
                split_ok = False
                detail.setdefault("split", f"decomposition identity fails at curve {i}, k={n}")
            if (n * dec.prime_symbol_sum) ** 2 > (2 * g + 2) ** 2 * q ** n:
                weil_ok = False
                detail.setdefault("weil", f"prime-sum bound fails at curve {i}, n={n}")
        for n in range(1, point_N + 1):
            if point_count_direct(curve, n) != q ** n + 1 - s_newton[n - 1]:
                points_ok = False
                detail.setdefault("points", f"point count mismatch at curve {i}, n={n}")

    scope = "all curves" if stride == 1 else f"every {stride}th curve"
    checks.extend([
        ("functional equation", fe_ok, f"exact coefficient symmetry, {scope}"),
        ("riemann hypothesis", rh_ok, f"root magnitudes within 1e-9 of q^(-1/2), {scope}"),
        ("dual trace paths", dual_ok,
         f"explicit sums == Newton power sums (n <= {explicit_N}), {scope}"),
        ("engine agreement", engine_ok, f"vectorized pipeline == per-curve path, {scope}"),
        ("eigenphase pairing", pair_ok, f"2g phases, closed under negation, {scope}"),
        ("trace reconstruction", recon_ok, f"phases reproduce s_n to 1e-9 q^(n/2), {scope}"),
        ("unitarity bound", bound_ok, f"|s_n| <= 2g q^(n/2), {scope}"),
        ("prime-sum bound", weil_ok, f"|n c_n| <= (2g+2) q^(n/2), {scope}"),
        ("power decomposition", split_ok, f"prime+square+higher == -s_k, {scope}"),
        ("point counts", points_ok, f"direct == q^n + 1 - s_n (n <= {point_N}), {scope}"),
    ])

    if g <= 3:
        battery_ok = True
        for name, func in _battery(q):
            direct = ens.ensemble_average(spec, lambda c: func(c.Q), budget=budget)
            decomposed = ens.moebius_decomposed_average(spec, func, budget=budget)
            if direct != decomposed:
                battery_ok = False
                detail.setdefault("battery", f"dual averages differ for {name}")
                break
        checks.append(("dual averages", battery_ok,
                       "direct == Moebius-decomposed for 10 functionals"))

    try:
        zdata = ens.DecompositionData.build(data)
        sane = int((zdata.z.astype(np.int64) * np.arange(N + 1)).sum(axis=1).max())
        checks.append(("divisor degrees", sane <= 2 * g + 1,
                       f"max total divisor degree {sane} <= 2g+1 (and prime-sum "
                       f"inversion integral)"))
    except ArithmeticError as exc:
        checks.append(("divisor degrees", False, f"inversion failed: {exc}"))
    return VerifyResult(q=q, g=g, curves=data.count, checks=checks,
                        elapsed=time.perf_counter() - t0)


# -- report rows -------------------------------------------------------------------

def moment_report_rows(reports):
    rows = []
    for r in reports:
        rows.append({
            "q": r.q, "g": r.g, "curves": r.curves,
            "spec": r.spec.label(), "sum_ak": r.spec.total,
            "in_range": r.in_range,
            "empirical_exact": r.empirical.exact_str(),
            "empirical": float(r.empirical),
            "squares_prediction_exact": fraction_str(r.squares),
            "squares_prediction": float(r.squares),
            "rmt_exact": str(r.rmt_moment.value),
            "rmt_valid": r.rmt_moment.valid,
            "dev_vs_squares": r.dev_vs_squares,
            "dev_vs_rmt": r.dev_vs_rmt,
        })
    return rows


def linstat_report_rows(reports):
    rows = []
    for r in reports:
        row = {
            "q": r.q, "g": r.g, "curves": r.curves, "tf": r.tf_name,
            "support_in_range": r.support_in_range,
            "mean_ref": fraction_str(r.mean_ref),
            "variance_ref": fraction_str(r.variance_ref),
        }
        for j, (raw, ref, dev) in enumerate(zip(r.raw_moments, r.references,
                                                r.deviations), start=1):
            row[f"moment{j}_exact"] = raw.exact_str()
            row[f"moment{j}"] = float(raw)
            row[f"moment{j}_ref"] = fraction_str(ref)
            row[f"moment{j}_dev"] = dev
        for j, cm in enumerate(r.central_moments, start=1):
            row[f"central{j}"] = float(cm)
        rows.append(row)
    return rows


def decompose_report_rows(decomp, ks, l=1):
    data = decomp.data
    rows = []
    n = data.count
    for k in ks:
        pi_k = ens.irreducible_count(data.q, k)
        report = ens.prime_term_moment(decomp, k, l)
        c_tot = int(decomp.c[:, k].sum())
        rows.append({
            "q": data.q, "g": data.g, "curves": n, "k": k, "l": l, "pi_k": pi_k,
            "prime_symbol_total": c_tot,
            "mean_prime_power_exact": fraction_str(report.p_power_mean),
            "mean_prime_power": float(report.p_power_mean),
            "mean_delta2_exact": fraction_str(report.delta2_mean),
            "mean_delta2": float(report.delta2_mean),
            "mean_pair_term_exact": fraction_str(report.p2_tuple_mean),
            "mean_pair_term": float(report.p2_tuple_mean),
            "delta2_reference": report.reference,
        })
    return rows


def write_report(path, rows, fmt, timestamp=True):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    if fmt == "json":
        payload = json.dumps(rows, indent=2, sort_keys=True, default=str) + "\n"
        with open(path, "w") as fh:
            fh.write(payload)
        return
    lines = []
    if timestamp:
        lines.append(f"# generated: {datetime.now(timezone.utc).isoformat()}")
    if rows:
        keys = list(rows[0].keys())
        lines.append(",".join(keys))
        for row in rows:
            lines.append(",".join(_csv_cell(row.get(k)) for k in keys))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _csv_cell(value):
    if isinstance(value, float):
        return repr(value)
    text = str(value)
    if "," in text or '"' in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


# -- experiment orchestration ---------------------------------------------------

@dataclass
class ExperimentResult:
    exit_code: int
    lines: list          # human-readable summary
    report_paths: list   # files written


def run_experiment(config):
    """Dispatch one subcommand worth of work; see the module docstring for
    the exit-code contract."""
    try:
        handler = _COMMANDS[config.command]
    except KeyError:
        raise ConfigError(f"unknown command {config.command!r}")
    try:
        return handler(config)
    except ens.BudgetError as exc:
        return ExperimentResult(3, [f"budget refusal: {exc}"], [])
    except ArithmeticError as exc:
        # FunctionalEquationError, RootMagnitudeError and the exactness
        # guards all derive from ArithmeticError: hard invariant failures
        return ExperimentResult(1, [f"invariant failure: {exc}"], [])
    except ConfigError:
        raise
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc))


def _out_path(config, stem):
    return os.path.join(config.out_dir, f"{stem}.{config.fmt}")


def _cmd_primes(config):
    depth = config.N if config.N is not None else max(6, 2 * config.g + 2)
    table, from_cache = cachemod.load_or_build_prime_table(
        config.cache_dir, config.q, depth)
    lines = [f"prime table q={config.q} through degree {table.max_degree} "
             f"({'cache' if from_cache else 'built'})"]
    lines += [f"  pi_{config.q}({d}) = {table.counts[d]}" for d in range(1, depth + 1)]
    if config.dump:
        for d in range(1, depth + 1):
            for prime in table.irreducibles(d):
                lines.append("  " + ",".join(str(c) for c in prime))
    return ExperimentResult(0, lines, [])


def _cmd_verify(config):
    lines, paths = [], []
    code = 0
    for g in config.g_range():
        result = verify_suite(config.q, g, workers=config.workers,
                              cache_dir=config.cache_dir, budget=config.budget)
        lines.append(f"verify q={config.q} g={g}: {result.curves} curves, "
                     f"{result.elapsed:.2f}s")
        lines += ["  " + ln for ln in result.lines()]
        if not result.ok:
            code = 1
    return ExperimentResult(code, lines, paths)


def _cmd_lfun(config):
    rows_all, paths = [], []
    for g in config.g_range():
        N = config.N if config.N is not None else 2 * g + 2
        data, _ = load_or_compute_data(config.q, g, N, cache_dir=config.cache_dir,
                                       workers=config.workers, budget=config.budget)
        A = ens.TraceEngine(config.q, g, N).coefficients(data.coeffs)
        rows = []
        for i in range(data.count):
            row = {"q": config.q, "g": g}
            row.update({f"c{j}": int(v) for j, v in enumerate(data.coeffs[i])})
            row.update({f"Astar{j}": int(v) for j, v in enumerate(A[i])})
            row.update({f"s{n}": int(v) for n, v in enumerate(data.s[i], start=1)})
            rows.append(row)
        path = _out_path(config, f"lfun_q{config.q}_g{g}")
        write_report(path, rows, config.fmt)
        paths.append(path)
        rows_all.append(f"lfun q={config.q} g={g}: wrote {len(rows)} records -> {path}")
    return ExperimentResult(0, rows_all, paths)


def _cmd_moment(config):
    specs = [ens.MomentSpec.parse(s) for s in (config.specs or ["(2,1)"])]
    lines, paths = [], []
    reports = []
    for g in config.g_range():
        need = max(sp.max_k for sp in specs)
        N = config.N if config.N is not None else need
        if N < need:
            raise ConfigError(f"N={N} below max requested power {need}")
        data, _ = load_or_compute_data(config.q, g, N, cache_dir=config.cache_dir,
                                       workers=config.workers, budget=config.budget)
        for sp in specs:
            rep = ens.trace_product_moment(data, sp)
            reports.append(rep)
            lines.append(
                f"moment q={config.q} g={g} {sp.label()}: "
                f"empirical {float(rep.empirical):+.6f} ({rep.empirical.exact_str()}), "
                f"squares {float(rep.squares):+.6f}, matrix-integral {rep.rmt_moment.value}"
                + ("" if rep.in_range else " [outside sum a_j k_j <= 2g-1]"))
    path = _out_path(config, f"moment_q{config.q}_g{config.g}"
                             + (f"-{config.g_max}" if config.g_max else ""))
    write_report(path, moment_report_rows(reports), config.fmt)
    paths.append(path)
    return ExperimentResult(0, lines, paths)


def _cmd_decompose(config):
    lines, paths = [], []
    for g in config.g_range():
        ks = [config.k] if config.k else list(range(2, min(2 * g + 2, 10)))
        N = config.N if config.N is not None else max(ks)
        data, _ = load_or_compute_data(config.q, g, max(N, max(ks)),
                                       cache_dir=config.cache_dir,
                                       workers=config.workers, budget=config.budget)
        decomp = ens.DecompositionData.build(data)
        rows = decompose_report_rows(decomp, ks, l=config.l)
        path = _out_path(config, f"decompose_q{config.q}_g{g}")
        write_report(path, rows, config.fmt)
        paths.append(path)
        for row in rows:
            lines.append(f"decompose q={config.q} g={g} k={row['k']}: "
                         f"<prime term^{2 * config.l}> {row['mean_prime_power']:+.6f}, "
                         f"<delta2> {row['mean_delta2']:+.6f} (ref {row['delta2_reference']})")
    return ExperimentResult(0, lines, paths)


def _cmd_sigma(config):
    rows, lines = [], []
    degrees = tuple(config.degrees)
    amax = config.alpha_max
    for alpha in range(0, amax + 1):
        val = ens.sigma_sum(config.q, degrees, alpha)
        # the closed table applies for alpha < min degree (alpha = 0 always)
        if alpha == 0:
            ref = 1
        elif alpha < min(degrees):
            ref = -config.q if alpha == 1 else 0
        else:
            ref = None
        rows.append({"q": config.q, "degrees": ";".join(map(str, degrees)),
                     "alpha": alpha, "sigma": val,
                     "reference": "" if ref is None else ref,
                     "matches_reference": "" if ref is None else val == ref})
        lines.append(f"sigma q={config.q} degrees={degrees} alpha={alpha}: {val}"
                     + (f" (ref {ref})" if ref is not None else ""))
        if ref is not None and val != ref:
            return ExperimentResult(1, lines + ["Moebius-sum table mismatch"], [])
    path = _out_path(config, f"sigma_q{config.q}")
    write_report(path, rows, config.fmt)
    return ExperimentResult(0, lines, [path])


def _cmd_charsum(config):
    degrees = tuple(config.degrees)
    bmax = config.beta_max if config.beta_max is not None else sum(degrees) + 1
    rows, lines = [], []
    code = 0
    for beta in range(0, bmax + 1):
        direct = ens.multi_char_sum(config.q, beta, degrees, method="direct")
        recip = ens.multi_char_sum(config.q, beta, degrees, method="reciprocity")
        agree = direct == recip
        vanish_expected = beta >= sum(degrees)
        ok = agree and (direct == 0 or not vanish_expected)
        if not ok:
            code = 1
        rows.append({"q": config.q, "degrees": ";".join(map(str, degrees)),
                     "beta": beta, "direct": direct, "reciprocity": recip,
                     "paths_agree": agree,
                     "must_vanish": vanish_expected})
        lines.append(f"charsum q={config.q} degrees={degrees} beta={beta}: "
                     f"{direct} (reciprocity {recip})")
    path = _out_path(config, f"charsum_q{config.q}")
    write_report(path, rows, config.fmt)
    return ExperimentResult(code, lines, [path])


def _cmd_rmt(config):
    specs = [ens.MomentSpec.parse(s) for s in (config.specs or ["(2,2)"])]
    rows, lines = [], []
    code = 0
    for g in config.g_range():
        for sp in specs:
            moment = rmt.usp_moment_exact(sp, g)
            row = {"g": g, "spec": sp.label(), "exact": moment.value,
                   "valid": moment.valid}
            if g in (1, 2):
                quad = rmt.weyl_quadrature_moment(sp, g)
                row["quadrature"] = quad
                row["agree_1e6"] = abs(quad - moment.value) < 1e-6
                if moment.valid and not row["agree_1e6"]:
                    code = 1
            rows.append(row)
            lines.append(f"rmt g={g} {sp.label()}: exact {moment.value}"
                         + (f", quadrature {row.get('quadrature'):.9f}"
                            if "quadrature" in row else "")
                         + ("" if moment.valid else " [outside validity]"))
    path = _out_path(config, "rmt")
    write_report(path, rows, config.fmt)
    return ExperimentResult(code, lines, [path])


def _cmd_linstat(config):
    tf = linstat.resolve_test_function(config.tf, config.custom_tf)
    reports, lines, paths = [], [], []
    for g in config.g_range():
        modes = linstat.active_modes(tf, 2 * g)
        N = config.N if config.N is not None else max(modes, default=1)
        data, _ = load_or_compute_data(config.q, g, N, cache_dir=config.cache_dir,
                                       workers=config.workers, budget=config.budget)
        rep = linstat.z_moments(data, tf, config.moments)
        reports.append(rep)
        devs = ", ".join(f"{d:.6f}" for d in rep.deviations)
        lines.append(f"linstat q={config.q} g={g} {tf.name}: deviations [{devs}]")
    path = _out_path(config, f"linstat_q{config.q}_{tf.name.replace(':', '')}")
    write_report(path, linstat_report_rows(reports), config.fmt)
    paths.append(path)
    if len(reports) > 1:
        for j in range(config.moments):
            first, last = reports[0].deviations[j], reports[-1].deviations[j]
            lines.append(f"  moment {j + 1} deviation: g={reports[0].g} {first:.6f} -> "
                         f"g={reports[-1].g} {last:.6f}")
    return ExperimentResult(0, lines, paths)


def _cmd_dump_cache(config):
    if not config.path:
        raise ConfigError("dump-cache needs --path")
    with open(config.path, "rb") as fh:
        magic = fh.read(4)
    lines = []
    if magic == cachemod.PT_MAGIC:
        table = cachemod.read_prime_table(config.path)
        lines.append(f"prime table q={table.q} max degree {table.max_degree}")
        for d in range(1, table.max_degree + 1):
            for prime in table.irreducibles(d):
                lines.append(",".join(str(c) for c in prime))
        return ExperimentResult(0, lines, [])
    if magic == cachemod.TR_MAGIC:
        q, g, N, coeffs, s = cachemod.read_trace_cache(config.path)
        rows = []
        for i in range(len(coeffs)):
            row = {f"c{j}": int(v) for j, v in enumerate(coeffs[i])}
            row.update({f"s{n}": int(v) for n, v in enumerate(s[i], start=1)})
            rows.append(row)
        path = _out_path(config, os.path.basename(config.path).rsplit(".", 1)[0])
        write_report(path, rows, "csv" if config.fmt == "json" else config.fmt)
        lines.append(f"trace cache q={q} g={g} N={N}: {len(rows)} records -> {path}")
        return ExperimentResult(0, lines, [path])
    raise ConfigError(f"{config.path}: not a recognized cache file")


_COMMANDS = {
    "primes": _cmd_primes,
    "verify": _cmd_verify,
    "lfun": _cmd_lfun,
    "moment": _cmd_moment,
    "decompose": _cmd_decompose,
    "sigma": _cmd_sigma,
    "charsum": _cmd_charsum,
    "rmt": _cmd_rmt,
    "linstat": _cmd_linstat,
    "dump-cache": _cmd_dump_cache,
}

