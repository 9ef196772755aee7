"""Command-line front end: build quantizations, compare traces, sweep
degree grids, and emit deterministic JSON/CSV reports.

Exit codes: 0 success; 2 invalid configuration or non-symplectic matrix;
3 theta-parity violation under --strict-theta; 4 numerical contract
violation (a certified residual exceeded its tolerance).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import conventions
from .errors import (
    CatmapsError,
    NonSymplecticError,
    NumericalContractError,
    ParityWarning,
)
from .heisenberg import projective_rep_check, weyl_operator
from .quantize import quantize, quantize_S
from .spectral import (
    eig_unitary,
    equidistribution_stats,
    ergodicity_variance,
    matrix_element_parseval,
    offdiagonal_sums,
    quantum_period,
    spectral_report,
)
from .symplectic import (
    IntegerSymplecticMatrix,
    arithmetic_period,
    congruent_mod_lattice,
    coset_representatives,
    generator_decomposition,
    theta_group_member,
    word_product,
)
from .theta import (
    ThetaEvalParams,
    fitted_law_matrix,
    theta_eval,
    theta_inner_product,
    transformation_law_residual,
)
from .trace import gauss_sum, trace_compare, trace_phase_calibration

DEFAULT_TOLERANCES = {
    "unitarity": 1e-10,
    "egorov": 1e-10,
    "trace_magnitude": 1e-8,
    "parseval": 1e-10,
    "eig_residual": 1e-8,
    "theta_quadrature": 1e-6,
    "gauss_sum": 1e-12,
    "projective_rep": 1e-12,
    "lattice_invariance": 1e-10,
    "law_bridge": 1e-6,
}

COMMANDS = ("quantize", "trace", "spectrum", "ergodic", "theta-check", "period-scan", "verify-all")


# ---------------------------------------------------------------------------
# Deterministic serialization: floats at 17 significant digits, sorted keys
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    s = f"{x:.17g}"
    return s


def to_json_text(obj) -> str:
    """Deterministic JSON with %.17g floats and sorted object keys."""
    out = io.StringIO()

    def emit(o):
        if o is None:
            out.write("null")
        elif o is True:
            out.write("true")
        elif o is False:
            out.write("false")
        elif isinstance(o, (int, np.integer)):
            out.write(str(int(o)))
        elif isinstance(o, (float, np.floating)):
            out.write(_fmt_float(float(o)))
        elif isinstance(o, complex):
            emit({"re": o.real, "im": o.imag})
        elif isinstance(o, str):
            out.write('"' + o.replace("\\", "\\\\").replace('"', '\\"') + '"')
        elif isinstance(o, dict):
            out.write("{")
            for i, k in enumerate(sorted(o)):
                if i:
                    out.write(", ")
                out.write('"' + str(k) + '": ')
                emit(o[k])
            out.write("}")
        elif isinstance(o, (list, tuple, np.ndarray)):
            seq = list(o)
            out.write("[")
            for i, v in enumerate(seq):
                if i:
                    out.write(", ")
                emit(v)
            out.write("]")
        else:
            raise TypeError(f"cannot serialize {type(o)}")

    emit(obj)
    out.write("\n")
    return out.getvalue()


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    """Validated run configuration for one CLI invocation."""

    command: str
    g: tuple[int, int, int, int] | None = None
    N_values: tuple[int, ...] = ()
    observable: tuple[int, int] = (1, 0)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output: Path = Path("reports")
    format: str = "json"
    strict_theta: bool = False
    seed: int = 0
    method: str = "auto"
    k_max: int = 4
    cap: int = 20000
    tau: complex = 1j
    samples: int = 20
    tau_angle: float = 0.0
    delta: float = 0.5
    level: str = "quick"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        for name, v in self.tolerances.items():
            if not v > 0:
                raise ValueError(f"tolerance {name} must be positive")
        if self.command != "verify-all":
            if self.g is None:
                raise ValueError("--g is required")
            if not self.N_values:
                raise ValueError("--N is required")
            if any(n < 1 for n in self.N_values):
                raise ValueError("N must be >= 1")
            if list(self.N_values) != sorted(set(self.N_values)):
                raise ValueError("N grid must be strictly increasing")


def parse_matrix(text: str) -> tuple[int, int, int, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"--g wants 'a,b,c,d', got {text!r}")
    return tuple(int(p) for p in parts)  # type: ignore[return-value]


def parse_grid(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(p) for p in text.split(","))


def _matrix_slug(g: tuple[int, int, int, int]) -> str:
    return "_".join(str(x).replace("-", "m") for x in g)


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CATMAP_THREADS", "1")))
    except ValueError:
        return 1


def _map_over_N(fn, Ns):
    workers = _thread_count()
    if workers == 1:
        return [fn(N) for N in Ns]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, Ns))


# ---------------------------------------------------------------------------
# Command implementations.  Each returns (exit_code, files_written)
# ---------------------------------------------------------------------------


def _prepare_g(cfg: RunConfig) -> IntegerSymplecticMatrix:
    g = IntegerSymplecticMatrix.from_abcd(*cfg.g)
    bad = [N for N in cfg.N_values if not theta_group_member(g, N)]
    if bad:
        if cfg.strict_theta:
            raise ParityViolation(f"theta-parity violated at N={bad} under --strict-theta")
        print(f"warning: theta-parity violated at N={bad}", file=sys.stderr)
    return g


class ParityViolation(CatmapsError):
    """Raised only under --strict-theta; mapped to exit code 3."""


def _write_report(cfg: RunConfig, name: str, payload: dict, csv_spec=None) -> Path:
    cfg.output.mkdir(parents=True, exist_ok=True)
    if cfg.format == "json":
        path = cfg.output / f"{name}.json"
        path.write_text(to_json_text(payload))
    else:
        path = cfg.output / f"{name}.csv"
        header, rows = csv_spec
        write_csv(path, header, rows)
    return path


def cmd_quantize(cfg: RunConfig) -> int:
    g = _prepare_g(cfg)
    slug = _matrix_slug(cfg.g)
    worst = 0.0

    def one(N: int):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParityWarning)
            q = quantize(g, N, method=cfg.method)
        return q

    results = _map_over_N(one, cfg.N_values)
    for N, q in zip(cfg.N_values, results):
        payload = q.to_json_dict()
        csv_rows = (
            ["N", "construction", "unitarity_residual", "egorov_residual"],
            [[N, q.construction, q.U.unitarity_residual, q.egorov]],
        )
        _write_report(cfg, f"quantize_g{slug}_N{N}", payload, csv_rows)
        worst = max(worst, q.U.unitarity_residual, q.egorov)
        print(
            f"quantize g=({slug}) N={N}: construction={q.construction} "
            f"unitarity={q.U.unitarity_residual:.3e} egorov={q.egorov:.3e}"
        )
    if worst > max(cfg.tolerances["unitarity"], cfg.tolerances["egorov"]):
        print(f"FAIL residual {worst:.3e} exceeds tolerance", file=sys.stderr)
        return 4
    return 0


def cmd_trace(cfg: RunConfig) -> int:
    g = _prepare_g(cfg)
    slug = _matrix_slug(cfg.g)
    reports = _map_over_N(lambda N: trace_compare(g, N, method=cfg.method), cfg.N_values)
    worst = 0.0
    for N, rep in zip(cfg.N_values, reports):
        payload = rep.to_json_dict()
        pd = rep.phase_discrepancy
        csv_rows = (
            ["N", "formula_re", "formula_im", "direct_re", "direct_im",
             "phase_re", "phase_im", "magnitude_error"],
            [[N, rep.formula_value.real, rep.formula_value.imag,
              rep.direct_value.real, rep.direct_value.imag,
              float("nan") if pd is None else pd.real,
              float("nan") if pd is None else pd.imag,
              rep.magnitude_error]],
        )
        _write_report(cfg, f"trace_g{slug}_N{N}", payload, csv_rows)
        worst = max(worst, rep.magnitude_error)
        print(f"trace g=({slug}) N={N}: |formula|={abs(rep.formula_value):.12f} "
              f"|direct|={abs(rep.direct_value):.12f} magnitude_error={rep.magnitude_error:.3e}")
    if worst > cfg.tolerances["trace_magnitude"]:
        print(f"FAIL trace magnitude error {worst:.3e}", file=sys.stderr)
        return 4
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    g = _prepare_g(cfg)
    slug = _matrix_slug(cfg.g)

    def one(N: int):
        rep = spectral_report(g, N, period_cap=cfg.cap)
        stats = equidistribution_stats(g, N, cfg.k_max)
        return rep, stats

    for N, (rep, stats) in zip(cfg.N_values, _map_over_N(one, cfg.N_values)):
        payload = rep.to_json_dict()
        payload["weyl_sums"] = stats["weyl_sums"]
        payload["star_discrepancy"] = stats["star_discrepancy"]
        payload["hyperbolic"] = stats["hyperbolic"]
        header = ["N", "quantum_period", "star_discrepancy"] + [
            f"weyl_sum_k{k}" for k in range(1, cfg.k_max + 1)
        ]
        row = [N, -1 if rep.quantum_period is None else rep.quantum_period,
               stats["star_discrepancy"]] + stats["weyl_sums"]
        _write_report(cfg, f"spectrum_g{slug}_N{N}", payload, (header, [row]))
        print(f"spectrum g=({slug}) N={N}: period={rep.quantum_period} "
              f"discrepancy={stats['star_discrepancy']:.4f} residual={rep.max_eigen_residual:.2e}")
    return 0


def cmd_ergodic(cfg: RunConfig) -> int:
    g = _prepare_g(cfg)
    slug = _matrix_slug(cfg.g)
    worst = 0.0

    def one(N: int):
        rep = ergodicity_variance(g, N, cfg.observable)
        rep.offdiag_sums[(cfg.tau_angle, cfg.delta)] = offdiagonal_sums(
            g, N, cfg.observable, cfg.tau_angle, cfg.delta
        )
        rep.offdiag_sums[(0.0, 3.0)] = offdiagonal_sums(g, N, cfg.observable, 0.0, 3.0)
        pv = matrix_element_parseval(g, N, cfg.observable)
        return rep, pv

    for N, (rep, pv) in zip(cfg.N_values, _map_over_N(one, cfg.N_values)):
        payload = rep.to_json_dict()
        payload["parseval"] = pv
        header = ["N", "diagonal_variance", "offdiag_windowed", "offdiag_all", "parseval"]
        row = [N, rep.diagonal_variance, rep.offdiag_sums[(cfg.tau_angle, cfg.delta)],
               rep.offdiag_sums[(0.0, 3.0)], pv]
        _write_report(cfg, f"ergodic_g{slug}_N{N}", payload, (header, [row]))
        worst = max(worst, abs(pv - 1.0))
        print(f"ergodic g=({slug}) N={N}: variance={rep.diagonal_variance:.6f} parseval_dev={abs(pv-1):.2e}")
    if worst > cfg.tolerances["parseval"]:
        print(f"FAIL parseval deviation {worst:.3e}", file=sys.stderr)
        return 4
    return 0


def cmd_theta_check(cfg: RunConfig) -> int:
    g = _prepare_g(cfg)
    slug = _matrix_slug(cfg.g)
    rows = []
    exit_code = 0
    for N in cfg.N_values:
        checks = theta_suite(g, N, cfg.tau, cfg.samples, cfg.tolerances, seed=cfg.seed)
        rows.extend(checks)
        payload = {"checks": checks, "conventions": conventions.record()}
        header = ["check", "residual", "tolerance", "pass"]
        csv_rows = [[c["check"], c["residual"], c["tolerance"], c["pass"]] for c in checks]
        _write_report(cfg, f"theta_g{slug}_N{N}", payload, (header, csv_rows))
        for c in checks:
            print(f"theta N={N} {c['check']}: residual={c['residual']:.3e} "
                  f"tol={c['tolerance']:.1e} {'PASS' if c['pass'] else 'FAIL'}")
            if not c["pass"]:
                exit_code = 4
    return exit_code


def cmd_period_scan(cfg: RunConfig) -> int:
    g = _prepare_g(cfg)
    slug = _matrix_slug(cfg.g)

    def one(N: int):
        k, c = quantum_period(g, N, cap=cfg.cap)
        am = arithmetic_period(g, N)
        am2 = arithmetic_period(g, 2 * N)
        if k is None:
            rel = "not-found"
        elif k == am:
            rel = "equal"
        elif am % k == 0:
            rel = "divides"
        elif k % am == 0:
            rel = "multiple"
        else:
            rel = "other"
        return k, c, am, am2, rel

    for N, (k, c, am, am2, rel) in zip(cfg.N_values, _map_over_N(one, cfg.N_values)):
        payload = {
            "g": {"entries": list(cfg.g)},
            "N": N,
            "quantum_period": k,
            "scalar_phase": None if c is None else {"re": c.real, "im": c.imag},
            "arithmetic_period_mod_N": am,
            "arithmetic_period_mod_2N": am2,
            "relation": rel,
            "conventions": conventions.record(),
        }
        header = ["N", "quantum_period", "arith_mod_N", "arith_mod_2N", "relation"]
        row = [N, -1 if k is None else k, am, am2, rel]
        _write_report(cfg, f"period_g{slug}_N{N}", payload, (header, [row]))
        print(f"period g=({slug}) N={N}: quantum={k} arithmetic={am} (mod 2N: {am2}) [{rel}]")
    return 0


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def _check(name: str, residual: float, tol: float, params=None) -> dict:
    return {
        "check": name,
        "params": params or {},
        "residual": float(residual),
        "tolerance": float(tol),
        "pass": bool(residual <= tol),
    }


def theta_suite(g, N, tau, samples, tol, seed=0) -> list[dict]:
    rng = np.random.default_rng(seed)
    checks = []
    # lattice invariance under the integral subgroup
    worst = 0.0
    p = ThetaEvalParams(tau=tau, N=N, mu=rng.integers(0, N))
    for _ in range(6):
        x, xi, t = rng.uniform(size=3)
        pp, q, k = int(rng.integers(-2, 3)), int(rng.integers(-2, 3)), int(rng.integers(-1, 2))
        s = k - 0.5 * pp * q
        moved = (pp + x, q + xi, s + t + 0.5 * (q * x - xi * pp))
        worst = max(worst, abs(theta_eval(p, *moved) - theta_eval(p, x, xi, t)))
    checks.append(_check("theta-lattice-invariance", worst, tol["lattice_invariance"],
                         {"N": N, "tau": [tau.real, tau.imag]}))
    # truncation stability
    base = ThetaEvalParams(tau=tau, N=N, mu=0, radius=8)
    double = ThetaEvalParams(tau=tau, N=N, mu=0, radius=16)
    dev = abs(theta_eval(base, 0.3, 0.7, 0.0) - theta_eval(double, 0.3, 0.7, 0.0))
    checks.append(_check("theta-truncation", dev, 1e-12, {"N": N}))
    # gram identity (quadrature against closed form, calibrated)
    worst = 0.0
    for mu in range(min(N, 2)):
        for mup in range(min(N, 2)):
            r = theta_inner_product(tau, tau, mu, mup, N, grid=128)
            worst = max(worst, abs(r["calibrated"] - r["closed_form"]))
    checks.append(_check("theta-gram", worst, tol["theta_quadrature"], {"N": N}))
    # transformation law + bridge to the quantizer (Fourier element)
    if theta_group_member(g, N):
        fit = transformation_law_residual(g, N, tau, samples=samples, seed=seed)
        checks.append(_check("theta-law", fit.residual / max(fit.scale, 1e-30), 1e-8,
                             {"N": N, "nu_abs": abs(fit.nu)}))
    C, resid = fitted_law_matrix(IntegerSymplecticMatrix.from_abcd(0, -1, 1, 0), N, tau, seed=seed)
    F = quantize_S(N).entries
    pair = np.vdot(F, C)
    scal = pair / abs(pair)
    Cn = C / np.linalg.norm(C) * np.linalg.norm(F)
    bridge = float(np.abs(Cn - scal * F).max())
    checks.append(_check("theta-law-bridge", bridge, tol["law_bridge"], {"N": N}))
    return checks


def _verify_suites(level: str, tol: dict, seed: int = 0) -> list[dict]:
    quick = level == "quick"
    Nmax = 32 if quick else 512
    rng = np.random.default_rng(seed)
    checks: list[dict] = []
    S = IntegerSymplecticMatrix.from_abcd(0, -1, 1, 0)
    T2 = IntegerSymplecticMatrix.from_abcd(1, 2, 0, 1)
    ARN = IntegerSymplecticMatrix.from_abcd(2, 1, 1, 1)
    G13 = IntegerSymplecticMatrix.from_abcd(1, 2, 1, 3)
    L2 = IntegerSymplecticMatrix.from_abcd(1, 0, 2, 1)
    mats = [S, T2, ARN, G13, L2]

    # generator words round-trip
    bad = 0
    for _ in range(25):
        word = []
        m = IntegerSymplecticMatrix.from_abcd(1, 0, 0, 1)
        for _ in range(int(rng.integers(0, 15))):
            tok = ("S", int(rng.choice([-1, 1]))) if rng.random() < 0.5 else ("T", int(rng.integers(-3, 4)))
            word.append(tok)
        m = word_product(tuple(word))
        if word_product(generator_decomposition(m)).entries != m.entries:
            bad += 1
    checks.append(_check("generator-words", bad, 0.5, {"trials": 25}))

    # coset index vs brute force
    worst = 0.0
    for m in mats:
        a, b, c, d = m.abcd
        gmI = ((a - 1, b), (c, d - 1))
        if (a - 1) * (d - 1) - b * c == 0:
            continue
        system = coset_representatives(gmI)
        distinct = True
        for i in range(len(system.representatives)):
            for j in range(i + 1, len(system.representatives)):
                if congruent_mod_lattice(system.representatives[i], system.representatives[j], gmI):
                    distinct = False
        worst = max(worst, 0.0 if (distinct and system.index == abs((a - 1) * (d - 1) - b * c)) else 1.0)
    checks.append(_check("coset-representatives", worst, 0.5, {}))

    # weyl algebra
    res = max(projective_rep_check(N) for N in (1, 4, 7))
    checks.append(_check("weyl-projective", res, tol["projective_rep"], {}))
    res = max(weyl_operator(N, 1, 1).unitarity_residual for N in (2, 5, 16))
    checks.append(_check("weyl-unitarity", res, tol["projective_rep"], {}))

    # unitarity + exact intertwining over the degree grid
    grid = sorted({2, 3, 4, 5, 8, 9, 16, 27, min(Nmax, 32), Nmax})
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        for m in mats:
            for N in grid:
                q = quantize(m, N)
                worst = max(worst, q.U.unitarity_residual, q.egorov)
    checks.append(_check("egorov", worst, max(tol["unitarity"], tol["egorov"]),
                         {"Nmax": Nmax, "matrices": len(mats)}))

    # gauss sums
    worst = max(abs(gauss_sum(N)[0] - gauss_sum(N)[1]) for N in range(1, 257))
    checks.append(_check("gauss-sum", worst, tol["gauss_sum"], {"Nmax": 256}))

    # trace formula magnitudes + phase constancy for the Fourier element
    worst = 0.0
    for m in mats:
        a, b, c, d = m.abcd
        if (1 - a) * (1 - d) - b * c == 0:
            continue  # parabolic: no fixed-point sum
        for N in (2, 3, 4, 8, min(Nmax, 16), Nmax):
            rep = trace_compare(m, N)
            worst = max(worst, rep.magnitude_error)
    checks.append(_check("trace-formula", worst, tol["trace_magnitude"], {"Nmax": Nmax}))
    cal = trace_phase_calibration()
    worst = 0.0
    for N in range(1, 33):
        rep = trace_compare(S, N)
        if rep.phase_discrepancy is not None:
            worst = max(worst, abs(rep.phase_discrepancy - cal))
    checks.append(_check("trace-phase-constancy", worst, tol["trace_magnitude"], {}))

    # Fourier spectrum: eigenvalues in {1,-1,-i,i}; multiplicity pattern
    worst = 0.0
    mult_bad = 0
    for N in range(1, min(Nmax, 64) + 1):
        lam = np.linalg.eigvals(quantize_S(N).entries)
        targets = np.array([1, -1, -1j, 1j])
        worst = max(worst, float(np.abs(lam[:, None] - targets[None, :]).min(axis=1).max()))
        counts = [int(np.sum(np.abs(lam - t) < 1e-6)) for t in targets]
        mq, r = divmod(N, 4)
        expected = {
            0: [mq + 1, mq, mq, mq - 1],
            1: [mq + 1, mq, mq, mq],
            2: [mq + 1, mq + 1, mq, mq],
            3: [mq + 1, mq + 1, mq + 1, mq],
        }[r]
        if counts != expected:
            mult_bad += 1
    checks.append(_check("fourier-spectrum", worst, tol["eig_residual"], {"Nmax": min(Nmax, 64)}))
    checks.append(_check("fourier-multiplicity-table", mult_bad, 0.5, {"Nmax": min(Nmax, 64)}))

    # theta suites at modest degree
    for N in (1, 2) if quick else (1, 2, 3, 4):
        checks.extend(theta_suite(S, N, 1j, 14, tol, seed=seed))

    # parseval and eigen residuals
    worst = 0.0
    for N in (8, min(Nmax, 64), Nmax):
        worst = max(worst, abs(matrix_element_parseval(ARN, N, (1, 0)) - 1.0))
    checks.append(_check("spectral-parseval", worst, tol["parseval"], {"Nmax": Nmax}))

    # quantum period against direct power iteration
    worst = 0.0
    for N in (3, 5, 8, 12):
        k, c = quantum_period(ARN, N)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParityWarning)
            U = quantize(ARN, N).U.entries
        acc = np.eye(N, dtype=complex)
        brute = None
        for j in range(1, 200):
            acc = acc @ U
            diag = np.diag(acc)
            cc = diag[int(np.argmax(np.abs(diag)))]
            if abs(abs(cc) - 1) < 1e-8 and np.abs(acc - cc / abs(cc) * np.eye(N)).max() < 1e-8:
                brute = j
                break
        worst = max(worst, 0.0 if (brute == k) else 1.0)
    checks.append(_check("quantum-period", worst, 0.5, {}))
    return checks


def verify_all(level: str = "quick", tolerances: dict | None = None, seed: int = 0) -> tuple[dict, int]:
    """Run every module's invariant suite; returns (report, exit code)."""
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tol.update(tolerances)
    checks = _verify_suites(level, tol, seed=seed)
    ok = all(c["pass"] for c in checks)
    report = {
        "level": level,
        "checks": checks,
        "all_pass": ok,
        "conventions": conventions.record(),
    }
    return report, 0 if ok else 4


def cmd_verify_all(cfg: RunConfig) -> int:
    report, code = verify_all(cfg.level, cfg.tolerances, seed=cfg.seed)
    for c in report["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'}  {c['check']:<28} "
              f"residual={c['residual']:.3e}  tol={c['tolerance']:.1e}")
    name = f"verify_{cfg.level}"
    header = ["check", "residual", "tolerance", "pass"]
    rows = [[c["check"], c["residual"], c["tolerance"], c["pass"]] for c in report["checks"]]
    _write_report(cfg, name, report, (header, rows))
    if code != 0:
        failed = [c["check"] for c in report["checks"] if not c["pass"]]
        print(f"FAILED suites: {', '.join(failed)}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="catmaps",
        description="Quantized torus automorphisms: unitaries, traces, spectra, ergodicity reports.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_g=True):
        if need_g:
            p.add_argument("--g", required=True, help="integer matrix 'a,b,c,d' (row-major)")
            p.add_argument("--N", required=True, help="degree grid: '8', '1..16', or '2,4,8'")
        p.add_argument("--output", default="reports", help="output directory")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--strict-theta", action="store_true",
                       help="exit 3 when the theta-parity condition fails")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tolerance", action="append", default=[],
                       metavar="NAME=VALUE", help="override a named tolerance")

    p = sub.add_parser("quantize", help="build U_{g,N} and certify residuals")
    common(p)
    p.add_argument("--method", choices=("auto", "transformation_law", "generator_word", "intertwiner"),
                   default="auto")

    p = sub.add_parser("trace", help="coset-sum trace vs direct trace")
    common(p)
    p.add_argument("--method", default="auto")

    p = sub.add_parser("spectrum", help="eigenphases, multiplicities, equidistribution")
    common(p)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--cap", type=int, default=20000)

    p = sub.add_parser("ergodic", help="eigenbasis matrix-element statistics")
    common(p)
    p.add_argument("--observable", default="1,0", help="integer pair 'm,n'")
    p.add_argument("--tau-angle", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.5)

    p = sub.add_parser("theta-check", help="theta-function verification suite")
    common(p)
    p.add_argument("--tau", default="0,1", help="complex structure 're,im'")
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("period-scan", help="quantum vs arithmetic periods over a grid")
    common(p)
    p.add_argument("--cap", type=int, default=20000)

    p = sub.add_parser("verify-all", help="run all module invariant suites")
    common(p, need_g=False)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--quick", action="store_true", help="N <= 32 (default)")
    g.add_argument("--full", action="store_true", help="N <= 512")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    tol = dict(DEFAULT_TOLERANCES)
    for item in args.tolerance:
        name, _, val = item.partition("=")
        if name not in tol:
            raise ValueError(f"unknown tolerance {name!r}")
        tol[name] = float(val)
    cfg = RunConfig(
        command=args.command,
        tolerances=tol,
        output=Path(args.output),
        format=args.format,
        strict_theta=args.strict_theta,
        seed=args.seed,
    )
    if args.command != "verify-all":
        cfg.g = parse_matrix(args.g)
        cfg.N_values = parse_grid(args.N)
    if args.command in ("quantize", "trace"):
        cfg.method = getattr(args, "method", "auto")
    if args.command == "spectrum":
        cfg.k_max = args.k_max
        cfg.cap = args.cap
    if args.command == "period-scan":
        cfg.cap = args.cap
    if args.command == "ergodic":
        cfg.observable = tuple(int(x) for x in args.observable.split(","))  # type: ignore
        cfg.tau_angle = args.tau_angle
        cfg.delta = args.delta
    if args.command == "theta-check":
        re, _, im = args.tau.partition(",")
        cfg.tau = complex(float(re), float(im))
        cfg.samples = args.samples
    if args.command == "verify-all":
        cfg.level = "full" if args.full else "quick"
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> int:
    """Execute one validated configuration; returns the exit status."""
    try:
        cfg.validate()
        dispatch = {
            "quantize": cmd_quantize,
            "trace": cmd_trace,
            "spectrum": cmd_spectrum,
            "ergodic": cmd_ergodic,
            "theta-check": cmd_theta_check,
            "period-scan": cmd_period_scan,
            "verify-all": cmd_verify_all,
        }
        return dispatch[cfg.command](cfg)
    except ParityViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NonSymplecticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalContractError,) as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return 4


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ValueError, NonSymplecticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
