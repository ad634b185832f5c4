"""Batch command-line front end. Every command emits a VerificationReport.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for malformed
input. Angles and loop parameters are given in full turns ("1/2" is a half
turn).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__

TIMING_KEY = "timing"


class InputError(Exception):
    """Malformed input; reported with exit code 2."""


@dataclass
class VerificationReport:
    command: str
    inputs: dict
    tags: list[str]
    checks: dict[str, bool] = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    witnesses: list[str] = field(default_factory=list)
    wall_clock: float = 0.0
    started: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def digest(self) -> str:
        blob = json.dumps({"command": self.command, "inputs": self.inputs}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def check(self, name: str, ok: bool) -> bool:
        self.checks[name] = self.checks.get(name, True) and bool(ok)
        return bool(ok)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": self.digest,
            "tags": self.tags,
            "checks": self.checks,
            "passed": self.passed,
            "data": self.data,
            "witnesses": self.witnesses,
            "version": __version__,
        }
        if timing:
            out[TIMING_KEY] = {"started": self.started, "wall_clock_s": round(self.wall_clock, 6)}
        return out

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True, indent=2)

    def to_markdown(self) -> str:
        lines = [f"# {self.command}", "", f"tags: {', '.join(self.tags)}", f"inputs digest: `{self.digest[:16]}`",
                 f"wall clock: {self.wall_clock:.3f} s", "", "| check | verdict |", "|---|---|"]
        for k, v in self.checks.items():
            lines.append(f"| {k} | {'pass' if v else 'FAIL'} |")
        if self.witnesses:
            lines += ["", "witnesses:"] + [f"- {w}" for w in self.witnesses]
        lines += ["", "```json", json.dumps(self.data, sort_keys=True, indent=2), "```", ""]
        return "\n".join(lines)


# input helpers


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {s!r}") from exc


def _frac_list(s: str) -> list[Fraction]:
    return [_frac(x) for x in s.replace(";", ",").split(",") if x.strip()]


def _load_json(path_or_text: str) -> Any:
    p = Path(path_or_text)
    try:
        text = p.read_text() if p.exists() else path_or_text
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path_or_text!r}: {exc}") from exc


def _parse(kind: str, fn: Callable[[Any], Any], data: Any) -> Any:
    try:
        return fn(data)
    except (KeyError, ValueError, TypeError, IndexError, AttributeError, ZeroDivisionError) as exc:
        raise InputError(f"invalid {kind}: {type(exc).__name__}: {exc}") from exc


def _load_lbcomplex(path: str):
    from .lbcx import LBComplex, validate

    c = _parse("LBComplex", LBComplex.from_json, _load_json(path))
    rep = validate(c)
    if not rep.ok:
        raise InputError(f"LBComplex fails validation at {rep.location}: {rep.violation}")
    return c


def _table(d: dict[int, int]) -> dict[str, int]:
    return {str(k): v for k, v in sorted(d.items())}


# commands


def cmd_cohp_table(a, rep: VerificationReport) -> None:
    from .cohp import euler_char, table, table_markdown

    if a.m < 0 or a.dmin > a.dmax:
        raise InputError("need m >= 0 and dmin <= dmax")
    t = table(a.m, a.dmin, a.dmax)
    rep.data["table"] = {str(d): {str(i): v for i, v in row.items()} for d, row in t.items()}
    rep.data["markdown"] = table_markdown(a.m, a.dmin, a.dmax)
    rep.check("Euler characteristic", all(
        sum((-1) ** i * v for i, v in row.items()) == euler_char(a.m, d) for d, row in t.items()))


def cmd_lbcx_rgamma(a, rep: VerificationReport) -> None:
    from .lbcx import expected_euler, rgamma

    c = _load_lbcomplex(a.file)
    res = rgamma(c, a.twist)
    rep.data.update({"dims": _table(res.dims), "floor": res.floor, "euler": res.euler})
    rep.check("Euler certificate", res.euler == expected_euler(c, a.twist))


def cmd_lbcx_is_zero(a, rep: VerificationReport) -> None:
    from .lbcx import is_zero_object

    c = _load_lbcomplex(a.file)
    z = is_zero_object(c)
    rep.data["is_zero"] = z
    rep.check(f"is_zero == {a.expect}", z == (a.expect == "true"))


def cmd_lbcx_ext_table(a, rep: VerificationReport) -> None:
    from .lbcx import rhom_dims

    f, g = _load_lbcomplex(a.left), _load_lbcomplex(a.right)
    if f.m != g.m:
        raise InputError("objects live on different projective spaces")
    rep.data["ext"] = _table(rhom_dims(f, g))
    rep.check("computed", True)


def cmd_hyper_spherical(a, rep: VerificationReport) -> None:
    from .hyper import check_spherical, reverify

    if a.n < 2:
        raise InputError("n must be at least 2")
    r = check_spherical(a.n)
    for k, v in r.verdicts.items():
        rep.check(k, v)
    rep.check("witnesses re-verify", reverify(r))
    rep.data["details"] = r.details
    rep.data["notes"] = r.notes
    rep.data["_witness_maps"] = r.witnesses


def _objects_or_generators(a, n: int):
    from .hyper import generators_x

    if getattr(a, "object", None):
        c = _load_lbcomplex(a.object)
        if c.m != n - 1:
            raise InputError(f"object must live on P^{n - 1}")
        return [("object", c)]
    return [(f"O({g.term(0)[0]})", g) for g in generators_x(n)]


def cmd_hyper_monad(a, rep: VerificationReport) -> None:
    from .hyper import HyperplaneData, compare_monad, monad, stalk_at_coordinate_point
    from .exactalg import is_acyclic

    if a.n < 2:
        raise InputError("n must be at least 2")
    hd = HyperplaneData(a.n)
    out = {}
    for name, g in _objects_or_generators(a, a.n):
        ok = compare_monad(g, hd)
        m = monad(g, hd)
        stalks = {str(al): is_acyclic(stalk_at_coordinate_point(m, al)) for al in range(1, a.n + 1)}
        rep.check("monad = (x)cone(s)", ok)
        rep.check("stalks acyclic at coordinate points", all(stalks.values()))
        out[name] = {"comparison": ok, "stalk_acyclic": stalks}
    rep.data["objects"] = out


def cmd_hyper_stalk(a, rep: VerificationReport) -> None:
    from .hyper import stalk_at_coordinate_point
    from .exactalg import cohomology_dims

    c = _load_lbcomplex(a.object)
    if not 1 <= a.alpha <= c.nvars:
        raise InputError(f"alpha must lie in 1..{c.nvars}")
    h = cohomology_dims(stalk_at_coordinate_point(c, a.alpha))
    rep.data["stalk_cohomology"] = _table(h)
    rep.check(f"acyclic == {a.expect}", (not h) == (a.expect == "true"))


def cmd_schober_check(a, rep: VerificationReport) -> None:
    from .schober import PerverseDiskDatum, check_perverse, has_no_origin_sections, intertwines, monodromies

    d = _parse("PerverseDiskDatum", PerverseDiskDatum.from_json, _load_json(a.file))
    chk = check_perverse(d)
    rep.data.update({"det_m_phi": str(chk.det_phi), "det_m_psi": str(chk.det_psi), "failing": list(chk.failing)})
    rep.check("monodromies invertible", chk.ok)
    rep.check("p m_Phi = m_Psi p", intertwines(d))
    rep.data["no_origin_sections"] = has_no_origin_sections(d)
    if chk.ok:
        m = monodromies(d)
        rep.data["m_phi"] = m.m_phi.to_json()
        rep.data["m_psi"] = m.m_psi.to_json()


def cmd_schober_ledger(a, rep: VerificationReport) -> None:
    from .schober import ledger_compose, ledger_entry, ledger_hyper_crosscheck, ledger_to_coherent, ledger_unit

    taus = _frac_list(a.taus)
    entries = [ledger_entry(t) for t in taus]
    total = ledger_unit()
    for e in entries:
        total = ledger_compose(total, e)
    rep.data["entries"] = [e.to_json() for e in entries]
    rep.data["composite"] = total.to_json()
    rep.check("shift = 2 * winding on full loops", all(e.shift == 2 * e.winding for e in entries + [total]))
    if total.theta == 0:
        desc = ledger_to_coherent(total)
        rep.data["coherent"] = {"twist": desc.twist, "shift": desc.shift}
    rep.check("inverse composes to the unit", all(ledger_compose(e, ledger_entry(-e.tau)).tau == 0 for e in entries))
    cross = ledger_hyper_crosscheck(a.n)
    rep.data["hyper_crosscheck"] = cross
    rep.check("full loop [-2] matches T_Psi_l", all(cross.values()))


def _load_diagram(path: str):
    from .schober import SchoberDiagram, validate_diagram

    dg = _parse("SchoberDiagram", SchoberDiagram.from_json, _load_json(path))
    rep = validate_diagram(dg)
    if not rep.ok:
        raise InputError("diagram invalid: " + "; ".join(rep.problems))
    return dg


def cmd_schober_diagram_hom(a, rep: VerificationReport) -> None:
    from .schober import diagram_hom_dims

    d1, d2 = _load_diagram(a.left), _load_diagram(a.right)
    if (d1.n, d1.r) != (d2.n, d2.r):
        raise InputError("diagrams must share (n, r)")
    rep.data["ext"] = _table(diagram_hom_dims(d1, d2))
    rep.check("computed", True)


def cmd_fan(a, rep: VerificationReport) -> None:
    from .fanskeleton import build_projective_fan, cone_dimension_check, cone_incidence, fan_json

    if a.n < 1:
        raise InputError("n must be at least 1")
    fan = build_projective_fan(a.n)
    rep.data["fan"] = fan_json(fan)
    rep.check("rays sum to zero", all(sum(r[i] for r in fan.rays) == 0 for i in range(fan.dim)))
    rep.check("2^n - 1 cones", len(fan.cones) == 2 ** a.n - 1)
    rep.check("dim sigma + dim sigma-perp = n - 1", all(cone_dimension_check(fan, j) for j in fan.cones))
    rep.check("incidence independent of eliminated index",
              cone_incidence(fan) == cone_incidence(build_projective_fan(a.n, 0)))


def cmd_skeleton_classify(a, rep: VerificationReport) -> None:
    from .fanskeleton import SkeletonPoint, classify_point

    p = _parse("SkeletonPoint", SkeletonPoint.from_json, _load_json(a.point))
    thetas = _frac_list(a.theta) if a.theta else [Fraction(0)]
    d = classify_point(p, thetas)
    rep.data["stratum"] = d.to_json()
    rep.check("conic invariance", all(classify_point(p.scaled(c), thetas) == d
                                      for c in (Fraction(1, 3), Fraction(2), Fraction(7, 5))))


def cmd_skeleton_verify(a, rep: VerificationReport) -> None:
    from .fanskeleton import verify_section_bijectivity

    tau = _frac(a.tau)
    if not -1 < tau < 1 or a.n < 2:
        raise InputError("need n >= 2 and tau in (-1, 1) turns")
    r = verify_section_bijectivity(a.n, tau, a.samples, a.seed)
    rep.data["report"] = r.to_json()
    rep.check("g x w round trip", r.ok)


def _named_sheaf(name: str):
    from .cellccc import build_generator, local_system

    if name.startswith("loc:"):
        return local_system(_frac(name[4:]))
    try:
        return build_generator(name)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_cellccc_compare(a, rep: VerificationReport) -> None:
    from .cellccc import ccc_compare

    r = ccc_compare()
    rep.data.update(r.to_json())
    rep.check("Ext grid cellular = coherent", not [m for m in r.mismatches if "*" not in m])
    rep.check("twist*twist matches O(-2)", not [m for m in r.mismatches if "*" in m])


def cmd_cellccc_convolve(a, rep: VerificationReport) -> None:
    from .cellccc import build_generator, cell_hom_dims, convolve

    f, g = _named_sheaf(a.left), _named_sheaf(a.right)
    h = convolve(f, g)
    rep.data["sheaf"] = h.to_json()
    rep.data["ext_from"] = {n: _table(cell_hom_dims(build_generator(n), h)) for n in ("unit", "twist")}
    rep.data["ext_to"] = {n: _table(cell_hom_dims(h, build_generator(n))) for n in ("unit", "twist")}
    rep.check("result in the singular-support window", h.in_window())
    rep.check("commutative up to Ext tables",
              all(cell_hom_dims(convolve(g, f), build_generator(n)) == cell_hom_dims(h, build_generator(n))
                  for n in ("unit", "twist")))


def cmd_cellccc_loc(a, rep: VerificationReport) -> None:
    from .cellccc import local_system_check

    lam = _frac(a.lam)
    if lam == 0:
        raise InputError("lambda must be nonzero")
    others = _frac_list(a.others) if a.others else []
    r = local_system_check(lam, others)
    rep.data.update(r.to_json())
    rep.check("local system Ext = torsion point Ext", r.ok)


def cmd_suite(a, rep: VerificationReport) -> None:
    from .suite import run_suite

    results = run_suite(a.n, seed=a.seed)
    for name, (ok, info) in results.items():
        rep.check(name, ok)
        rep.data[name] = info


TAGS = {
    "cohp table": ["cohomology-Pm"],
    "lbcx rgamma": ["cech-hypercohomology"],
    "lbcx is-zero": ["generator-test"],
    "lbcx ext-table": ["rhom"],
    "hyper spherical-check": ["SF1", "SF2", "SF3", "SF4", "twist-identifications"],
    "hyper monad": ["Thm-main-square", "generic-section"],
    "hyper stalk": ["generic-section"],
    "schober check": ["perverse-disk-quiver"],
    "schober ledger": ["monodromy-ledger", "metaplectic-shift"],
    "schober diagram-hom": ["M(r)-diagrams"],
    "fan": ["fan-Sigma"],
    "skeleton classify": ["skeleton-strata"],
    "skeleton verify-section": ["canonical-section-homeo"],
    "cellccc compare": ["CCC-n2"],
    "cellccc convolve": ["torus-convolution"],
    "cellccc loc": ["Fourier-local-systems"],
    "suite": ["acceptance-battery"],
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print the JSON report")
    common.add_argument("--out", default=argparse.SUPPRESS, help="directory for report and witness files")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled checks")
    common.add_argument("--e-cap", type=int, default=argparse.SUPPRESS, help="cap on the Cech floor E")

    p = argparse.ArgumentParser(prog="schoberkit", parents=[common],
                                description="Exact verification of spherical functors, schobers and the CCC.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--suite", choices=["full"], help="run the acceptance battery")
    p.add_argument("--n", type=int, default=argparse.SUPPRESS, help="dimension for --suite")
    sub = p.add_subparsers(dest="group")

    def add(parent, name: str, fn, **kw):
        sp = parent.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    g = sub.add_parser("cohp").add_subparsers(dest="cmd", required=True)
    sp = add(g, "table", cmd_cohp_table)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--dmin", type=int, default=-4)
    sp.add_argument("--dmax", type=int, default=4)

    g = sub.add_parser("lbcx").add_subparsers(dest="cmd", required=True)
    sp = add(g, "rgamma", cmd_lbcx_rgamma)
    sp.add_argument("--file", required=True)
    sp.add_argument("--twist", type=int, default=0)
    sp = add(g, "is-zero", cmd_lbcx_is_zero)
    sp.add_argument("--file", required=True)
    sp.add_argument("--expect", choices=["true", "false"], default="true")
    sp = add(g, "ext-table", cmd_lbcx_ext_table)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)

    g = sub.add_parser("hyper").add_subparsers(dest="cmd", required=True)
    sp = add(g, "spherical-check", cmd_hyper_spherical)
    sp.add_argument("--n", type=int, required=True)
    sp = add(g, "monad", cmd_hyper_monad)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--object")
    sp = add(g, "stalk", cmd_hyper_stalk)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--object", required=True)
    sp.add_argument("--expect", choices=["true", "false"], default="true")

    g = sub.add_parser("schober").add_subparsers(dest="cmd", required=True)
    sp = add(g, "check", cmd_schober_check)
    sp.add_argument("--file", required=True)
    sp = add(g, "ledger", cmd_schober_ledger)
    sp.add_argument("--taus", required=True, help="comma-separated loop parameters in turns")
    sp.add_argument("--n", type=int, default=2)
    sp = add(g, "diagram-hom", cmd_schober_diagram_hom)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)

    sp = add(sub, "fan", cmd_fan)
    sp.add_argument("--n", type=int, required=True)

    g = sub.add_parser("skeleton").add_subparsers(dest="cmd", required=True)
    sp = add(g, "classify", cmd_skeleton_classify)
    sp.add_argument("--point", required=True, help="JSON text or file: {radii: [...], angles_turns: [...]}")
    sp.add_argument("--theta", default="0", help="comma-separated angles in turns")
    sp = add(g, "verify-section", cmd_skeleton_verify)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--tau", required=True, help="loop parameter in turns, in (-1, 1)")
    sp.add_argument("--samples", type=int, default=1000)

    g = sub.add_parser("cellccc").add_subparsers(dest="cmd", required=True)
    add(g, "compare", cmd_cellccc_compare)
    sp = add(g, "convolve", cmd_cellccc_convolve)
    sp.add_argument("--left", required=True, help="unit, twist, constant or loc:LAMBDA")
    sp.add_argument("--right", required=True)
    sp = add(g, "loc", cmd_cellccc_loc)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--others", default="")

    sp = add(sub, "suite", cmd_suite)
    sp.add_argument("--n", type=int, required=True)
    return p


def _command_name(a) -> str:
    if getattr(a, "fn", None) is cmd_suite:
        return "suite"
    return " ".join(x for x in (getattr(a, "group", None), getattr(a, "cmd", None)) if x)


def _inputs(a) -> dict:
    skip = {"fn", "group", "cmd", "json", "out", "suite"}
    return {k: v for k, v in sorted(vars(a).items()) if k not in skip}


def _write_outputs(rep: VerificationReport, out: str) -> None:
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    maps = rep.data.pop("_witness_maps", None)
    if maps:
        for i, w in enumerate(maps):
            path = d / f"witness_{i:03d}.json"
            path.write_text(json.dumps(w, sort_keys=True))
            rep.witnesses.append(str(path))
    (d / "report.json").write_text(rep.dumps())
    (d / "report.md").write_text(rep.to_markdown())


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if getattr(a, "fn", None) is None:
        if a.suite == "full":
            if not hasattr(a, "n"):
                parser.error("--suite full requires --n")
            a.fn = cmd_suite
        else:
            parser.print_help(sys.stderr)
            return 2
    a.seed = getattr(a, "seed", 0)
    e_cap = getattr(a, "e_cap", None)
    name = _command_name(a)
    rep = VerificationReport(name, _inputs(a), TAGS.get(name, []))
    rep.started = time.time()
    t0 = time.perf_counter()
    random.seed(a.seed)
    try:
        from .lbcx import RGammaDiagnostic, e_cap_context

        if e_cap is not None:
            with e_cap_context(e_cap):
                a.fn(a, rep)
        else:
            a.fn(a, rep)
    except InputError as exc:
        print(json.dumps({"error": "malformed input", "diagnostic": str(exc)}), file=sys.stderr)
        return 2
    except RGammaDiagnostic as exc:
        rep.check("hypercohomology certified", False)
        rep.data["diagnostic"] = str(exc)
    rep.wall_clock = time.perf_counter() - t0
    if hasattr(a, "out"):
        _write_outputs(rep, a.out)
    else:
        rep.data.pop("_witness_maps", None)
    if getattr(a, "json", False):
        print(rep.dumps())
    else:
        print(rep.to_markdown())
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
