"""Text and JSON/CSV formats: parsing, serialization, presets.

File formats are versioned with a leading comment line:

* series file —   ``# zerodyn series 1`` then one exact rational per
  line ("num/den" or integer), line n giving the coefficient of x^n;
* polynomial file — ``# zerodyn poly 1`` with the same layout, lowest
  degree first.

Inline polynomial shorthand accepts integer-coefficient expressions
like ``x^3+6x`` or ``-2x^2+x-1``; the parser also takes rational
coefficients ("1/2x^2") so emitted values round-trip.

JSON reports embed the run configuration; CSV emits one row per m or
per root for direct plotting, after a versioned comment line.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from fractions import Fraction

import mpmath as mp

from .construct import CounterexampleReport, StagePlan
from .dynamics import AttractorReport, ConvergenceReport, OnsetReport
from .limits import ml_partial
from .poly import Poly
from .roots import RootSet
from .scalars import fraction_str, parse_fraction
from .series import LPObstructionResult, OperatorClass, PowerSeries

SERIES_HEADER = "# zerodyn series 1"
POLY_HEADER = "# zerodyn poly 1"
CSV_HEADER_PREFIX = "# zerodyn csv"

MP_DIGITS = 40  # serialized digits for floating values; plenty to resume from


# ---------------------------------------------------------------------------
# rationals / floats


def mpf_str(x) -> str:
    if not isinstance(x, mp.mpf):
        x = mp.mpf(x)  # ints/floats convert exactly at any working precision
    return mp.nstr(x, MP_DIGITS, strip_zeros=True)


def mpc_pair(z):
    if not isinstance(z, (mp.mpc, mp.mpf)):
        z = mp.mpc(z)
    return [mpf_str(mp.re(z)), mpf_str(mp.im(z))]


def _coeff_strings(f: Poly):
    if f.is_exact:
        return [fraction_str(c) for c in f.coeffs]
    return [mpf_str(c) for c in f.coeffs]


# ---------------------------------------------------------------------------
# coefficient files


def _parse_rational_lines(text: str, kind: str):
    lines = text.splitlines()
    values = []
    seen_header = False
    for ln in lines:
        s = ln.strip()
        if not s:
            continue
        if s.startswith("#"):
            if not seen_header and kind not in s:
                raise ValueError(f"file header {s!r} does not declare a {kind}")
            seen_header = True
            continue
        values.append(parse_fraction(s))
    if not values:
        raise ValueError(f"no coefficients found in {kind} input")
    return values


def parse_series_text(text: str) -> PowerSeries:
    return PowerSeries(_parse_rational_lines(text, "series"))


def format_series_text(phi: PowerSeries) -> str:
    if not phi.is_exact:
        raise ValueError("series files store exact rationals only")
    body = "\n".join(fraction_str(c) for c in phi.coeffs)
    return f"{SERIES_HEADER}\n{body}\n"


def parse_poly_text(text: str) -> Poly:
    return Poly(_parse_rational_lines(text, "poly"))


def format_poly_text(f: Poly) -> str:
    if not f.is_exact:
        raise ValueError("polynomial files store exact rationals only")
    body = "\n".join(fraction_str(c) for c in f.coeffs) if f.coeffs else "0"
    return f"{POLY_HEADER}\n{body}\n"


# ---------------------------------------------------------------------------
# inline polynomial shorthand

_TERM_RE = re.compile(
    r"""
    (?P<sign>[+-]?)\s*
    (?:
        (?P<coeff>\d+(?:/\d+)?)\s*\*?\s*(?P<var1>x(?:\^(?P<exp1>\d+))?)?
      | (?P<var2>x(?:\^(?P<exp2>\d+))?)
    )
    """,
    re.VERBOSE,
)


def parse_poly_inline(text: str) -> Poly:
    """Parse ``x^3+6x``-style shorthand into an exact polynomial."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial expression")
    pos = 0
    terms = {}
    while pos < len(s):
        mobj = _TERM_RE.match(s, pos)
        if not mobj or mobj.end() == pos:
            raise ValueError(f"cannot parse polynomial at ...{s[pos:]!r}")
        sign = -1 if mobj.group("sign") == "-" else 1
        coeff = mobj.group("coeff")
        var = mobj.group("var1") or mobj.group("var2")
        exp = mobj.group("exp1") or mobj.group("exp2")
        c = Fraction(coeff) if coeff else Fraction(1)
        k = 0
        if var:
            k = int(exp) if exp else 1
        terms[k] = terms.get(k, Fraction(0)) + sign * c
        pos = mobj.end()
    deg = max(terms)
    return Poly([terms.get(k, Fraction(0)) for k in range(deg + 1)])


def format_poly_inline_exact(f: Poly) -> str:
    """Inline form that parse_poly_inline reads back identically."""
    if f.is_zero:
        return "0"
    parts = []
    for k in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        x = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        if k > 0 and mag == 1:
            body = x
        else:
            body = f"{fraction_str(mag)}{x}"
        parts.append(("-" if c < 0 else ("+" if parts else "")) + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# series presets


def resolve_series(spec: str, min_order: int = 0) -> PowerSeries:
    """Resolve a --series argument: preset, inline, or file path.

    Presets: ``truncated-exp:K`` (e^x partial sum through x^K),
    ``mittag-leffler:p:K``, ``poly:<inline shorthand>``.  Anything else
    is read as a series file.  The result is zero-extended to
    ``min_order`` when it came from a polynomial (known zero tail).
    """
    from .series import extend

    if spec.startswith("truncated-exp:"):
        k = int(spec.split(":", 1)[1])
        phi = PowerSeries(Fraction(1, math.factorial(n)) for n in range(k + 1))
        return phi
    if spec.startswith("mittag-leffler:"):
        _, p, k = spec.split(":")
        return ml_partial(int(p), int(k))
    if spec.startswith("poly:"):
        f = parse_poly_inline(spec.split(":", 1)[1])
        phi = PowerSeries(f.coefficient(k) for k in range(int(f.degree) + 1))
        return extend(phi, min_order)
    try:
        fh = open(spec, "r", encoding="utf-8")
    except OSError as exc:
        raise ValueError(
            f"{spec!r} is not a readable series file (and not a preset; "
            f"presets are truncated-exp:K, mittag-leffler:p:K, poly:<inline>): {exc}"
        )
    with fh:
        return parse_series_text(fh.read())


def resolve_poly(spec: str) -> Poly:
    """Resolve a --poly argument: file path, else inline shorthand."""
    try:
        fh = open(spec, "r", encoding="utf-8")
    except OSError:
        try:
            return parse_poly_inline(spec)
        except ValueError as exc:
            raise ValueError(
                f"{spec!r} is neither a readable file nor inline shorthand: {exc}"
            )
    with fh:
        return parse_poly_text(fh.read())


# ---------------------------------------------------------------------------
# JSON payloads


def poly_payload(f: Poly):
    out = {"coeffs": _coeff_strings(f)}
    if f.is_exact:
        out["inline"] = format_poly_inline_exact(f)
    else:
        out["precision_bits"] = f.precision
    return out


def series_payload(phi: PowerSeries):
    if phi.is_exact:
        return {"coeffs": [fraction_str(c) for c in phi.coeffs]}
    return {"coeffs": [mpf_str(c) for c in phi.coeffs], "precision_bits": phi.precision}


def operator_class_payload(cls: OperatorClass):
    out = {"form": cls.form}
    if cls.is_general:
        out.update(p=cls.p, alpha=fraction_str(cls.alpha), beta=fraction_str(cls.beta))
    elif cls.is_pure_exponential:
        out.update(c=fraction_str(cls.c), gamma=fraction_str(cls.gamma))
    else:
        out.update(mu=cls.mu)
    return out


def lp_result_payload(res: LPObstructionResult):
    return {
        "verdict": str(res),
        "obstructed": res.obstructed,
        "d_witness": res.d_witness,
        "d_max": res.d_max,
        "nonreal_counts": list(res.nonreal_counts),
    }


def rootset_payload(rs: RootSet):
    return {
        "source_degree": rs.source_degree,
        "precision_bits": rs.precision_bits,
        "roots": [
            {
                "re": mpf_str(r.location.real),
                "im": mpf_str(r.location.imag),
                "multiplicity": r.multiplicity,
                "residual": r.residual,
            }
            for r in rs.roots
        ],
    }


def onset_payload(rep: OnsetReport):
    return {
        "mode": rep.mode,
        "m0": rep.m0,
        "m_max": rep.m_max,
        "found": rep.found,
        "trace": [{"m": m, "nonreal": n} for m, n in rep.trace],
    }


def convergence_payload(rep: ConvergenceReport):
    return {
        "p": rep.p,
        "alpha": fraction_str(rep.alpha),
        "beta": fraction_str(rep.beta),
        "fitted_slope": rep.fitted_slope,
        "exact_convergence": rep.exact_convergence,
        "limit_poly": poly_payload(rep.limit_poly),
        "samples": [
            {"m": m, "sup_norm_error": float(e)} for m, e in rep.samples
        ],
    }


def attractor_payload(rep: AttractorReport):
    return {
        "p": rep.p,
        "alpha": fraction_str(rep.alpha),
        "beta": fraction_str(rep.beta),
        "gamma": mpc_pair(rep.gamma),
        "epsilon": rep.epsilon,
        "records": [
            {
                "m": r.m,
                "max_scaled_star_distance": r.max_scaled_star_distance,
                "containment_epsilon_needed": r.containment_epsilon_needed,
                "contained": r.contained,
                "all_simple": r.all_simple,
            }
            for r in rep.records
        ],
    }


def plan_payload(plan: StagePlan):
    return {
        "degrees": list(plan.degrees),
        "gammas": [fraction_str(g) for g in plan.gammas],
        "targets": {
            f"{m},{k}": mpc_pair(a) for (m, k), a in sorted(plan.targets.items())
        },
        "radii": {
            f"{m},{k}": mpf_str(r) for (m, k), r in sorted(plan.radii.items())
        },
        "coefficient_bound_ok": list(plan.coefficient_bound_ok),
        "precision_bits": plan.precision_bits,
    }


def plan_from_payload(data) -> StagePlan:
    prec = int(data["precision_bits"])
    with mp.workprec(prec):
        targets = {}
        for key, (re_s, im_s) in data["targets"].items():
            m, k = key.split(",")
            targets[(int(m), int(k))] = mp.mpc(mp.mpf(re_s), mp.mpf(im_s))
        radii = {}
        for key, r_s in data["radii"].items():
            m, k = key.split(",")
            radii[(int(m), int(k))] = mp.mpf(r_s)
    return StagePlan(
        degrees=tuple(int(d) for d in data["degrees"]),
        targets=targets,
        radii=radii,
        gammas=tuple(parse_fraction(g) for g in data["gammas"]),
        coefficient_bound_ok=tuple(bool(b) for b in data["coefficient_bound_ok"]),
        precision_bits=prec,
    )


def counterexample_payload(rep: CounterexampleReport):
    return {
        "plan": plan_payload(rep.plan),
        "witnessed": {
            f"{m},{k}": mpc_pair(z) for (m, k), z in sorted(rep.witnessed.items())
        },
        "nonreal_totals": {str(m): n for m, n in sorted(rep.nonreal_totals.items())},
        "product_coeffs": [fraction_str(c) for c in rep.product_coeffs],
        "derivative_identity_ok": rep.derivative_identity_ok,
        "boundary_tie_count": len(rep.boundary_ties),
    }


# ---------------------------------------------------------------------------
# CSV emitters: one row per m or per root


def _csv_text(kind: str, fieldnames, rows):
    buf = io.StringIO()
    buf.write(f"{CSV_HEADER_PREFIX} {kind} 1\n")
    writer = csv.DictWriter(buf, fieldnames=fieldnames)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def rootset_csv(rs: RootSet) -> str:
    rows = [
        {
            "re": mpf_str(r.location.real),
            "im": mpf_str(r.location.imag),
            "multiplicity": r.multiplicity,
            "residual": r.residual,
        }
        for r in rs.roots
    ]
    return _csv_text("roots", ["re", "im", "multiplicity", "residual"], rows)


def onset_csv(rep: OnsetReport) -> str:
    rows = [{"m": m, "nonreal": n} for m, n in rep.trace]
    return _csv_text("onset", ["m", "nonreal"], rows)


def convergence_csv(rep: ConvergenceReport) -> str:
    rows = [{"m": m, "sup_norm_error": float(e)} for m, e in rep.samples]
    return _csv_text("convergence", ["m", "sup_norm_error"], rows)


def attractor_csv(rep: AttractorReport) -> str:
    rows = [
        {
            "m": r.m,
            "containment_epsilon_needed": r.containment_epsilon_needed,
            "max_scaled_star_distance": r.max_scaled_star_distance,
            "contained": r.contained,
            "all_simple": "" if r.all_simple is None else r.all_simple,
        }
        for r in rep.records
    ]
    return _csv_text(
        "attractor",
        [
            "m",
            "containment_epsilon_needed",
            "max_scaled_star_distance",
            "contained",
            "all_simple",
        ],
        rows,
    )


def dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"
