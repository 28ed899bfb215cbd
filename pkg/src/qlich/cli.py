"""Command line front end: parse a tensor, run checks, print a report.

Exit status is 0 when every check in the report passes, 1 when one fails
and 2 when the input cannot be parsed.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from pathlib import Path

from .field_algebra import DimensionMismatch
from .nambu import (
    NambuTensor,
    bracket_of,
    even_order_bridge,
    filippov_check,
    leibniz_check,
    nambu_density,
    random_poly,
    takhtajan_check,
)
from .ope import CONVENTIONS
from .poisson import PoissonTensor, jacobi_check, lp_cohomology, schouten, to_state
from .quantum import (
    QuantumGenerator,
    Truncation,
    check_chiral_compat,
    check_generator_self_ope,
    check_nilpotency,
    quantum_cohomology,
)
from .render import ParseError, parse_poly, render_poly, render_state

SCHEMA = "1"
COMMANDS = (
    "check-jacobi",
    "lp-cohomology",
    "build-operator",
    "qcohomology",
    "verify-nilpotent",
    "verify-chiral",
    "nambu-check",
)
DEFAULTS = {
    "max_poly_degree": 4,
    "weight": 2,
    "max_letters": 6,
    "fermion_range": "-4,4",
    "convention": "section2",
    "format": "text",
    "seed": 0,
    "trials": 20,
}

_ENTRY = re.compile(r"^\s*P\s*\[([\d\s,]+)\]\s*=(.*)$")


class InputError(ValueError):
    pass


# -- input ---------------------------------------------------------------------


def parse_entry(text: str, n: int) -> tuple[tuple, object]:
    m = _ENTRY.match(text)
    if not m:
        raise InputError(f"entry must look like 'P[i,j,...]=expr': {text!r}")
    try:
        idx = tuple(int(t) for t in m.group(1).split(","))
    except ValueError:
        raise InputError(f"bad index list in {text!r}") from None
    if list(idx) != sorted(set(idx)):
        raise InputError(f"indices must be strictly increasing in {text!r}")
    if any(not 1 <= i <= n for i in idx):
        raise InputError(f"index outside 1..{n} in {text!r}")
    return idx, parse_poly(m.group(2), n)


def parse_tensor(n: int, entries: list[str], order: int | None = None) -> NambuTensor:
    if n is None or n < 1:
        raise InputError("--dim must be a positive integer")
    comps = {}
    for text in entries:
        idx, p = parse_entry(text, n)
        if idx in comps:
            raise InputError(f"entry P{list(idx)} given twice")
        comps[idx] = p
    orders = {len(idx) for idx in comps}
    if order is None:
        order = orders.pop() if len(orders) == 1 else 2
        if orders:
            raise InputError("entries have different numbers of indices")
    elif orders - {order}:
        raise InputError(f"entries do not match --order {order}")
    return NambuTensor(n, order, comps)


def read_spec_file(path: str) -> dict:
    """TOML when the file ends in .toml, else flat ``key = value`` lines.

    In the flat form ``entry`` may repeat; keys use dashes or underscores.
    """
    text = Path(path).read_text()
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise InputError(f"{path}: {exc}") from None
    else:
        raw: dict = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(f"{path}:{lineno}: expected key = value")
            key, value = key.strip().replace("-", "_"), value.strip()
            if key in ("entry", "entries"):
                raw.setdefault("entry", []).append(value)
            else:
                raw[key] = value
    out = {}
    for key, value in raw.items():
        key = key.replace("-", "_")
        if key == "entries":
            key = "entry"
        if key == "entry" and isinstance(value, str):
            value = [value]
        out[key] = value
    return out


def _fermion_range(value) -> tuple[int, int]:
    if isinstance(value, (list, tuple)):
        lo, hi = value
    else:
        try:
            lo, hi = (int(t) for t in str(value).split(","))
        except ValueError:
            raise InputError(f"--fermion-range expects 'lo,hi', got {value!r}") from None
    if lo > hi:
        raise InputError("--fermion-range: lo > hi")
    return int(lo), int(hi)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qlich", description="Poisson, quantum Lichnerowicz and Nambu checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--dim", type=int)
    p.add_argument("--entry", action="append", help='tensor component, e.g. "P[1,2]=x1*x2" (repeatable)')
    p.add_argument("--order", type=int)
    p.add_argument("--max-poly-degree", type=int)
    p.add_argument("--weight", type=int, help="maximal conformal weight of the truncation")
    p.add_argument("--max-letters", type=int)
    p.add_argument("--fermion-range", help="lo,hi")
    p.add_argument("--page", choices=("hbar1", "full"))
    p.add_argument("--convention", choices=sorted(CONVENTIONS))
    p.add_argument("--format", choices=("text", "json"))
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, help="random identity trials for nambu-check")
    p.add_argument("--spec-file", help="TOML or flat key=value file with the same keys")
    p.add_argument("--out", help="also write the report to this file")
    return p


def resolve_options(args: argparse.Namespace) -> dict:
    opts = {k: v for k, v in vars(args).items() if v is not None}
    if args.spec_file:
        for key, value in read_spec_file(args.spec_file).items():
            if key == "entry":
                opts.setdefault("entry", list(value))
            else:
                opts.setdefault(key, value)
    for key, value in DEFAULTS.items():
        opts.setdefault(key, value)
    # nilpotency is a statement about every hbar order; cohomology defaults to the first page
    opts.setdefault("page", "full" if args.command == "verify-nilpotent" else "hbar1")
    try:
        for key in ("dim", "order", "max_poly_degree", "weight", "max_letters", "seed", "trials"):
            if key in opts:
                opts[key] = int(opts[key])
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad integer option: {exc}") from None
    opts["fermion_range"] = _fermion_range(opts["fermion_range"])
    if opts["page"] not in ("hbar1", "full"):
        raise InputError(f"unknown page {opts['page']!r}")
    if opts["convention"] not in CONVENTIONS:
        raise InputError(f"unknown convention {opts['convention']!r}")
    opts.setdefault("entry", [])
    return opts


# -- commands ------------------------------------------------------------------


def _check(name: str, passed: bool, detail=None) -> dict:
    out = {"name": name, "passed": bool(passed)}
    if detail is not None:
        out["detail"] = detail
    return out


def _bounds(opts) -> Truncation:
    return Truncation(opts["weight"], opts["max_letters"], opts["fermion_range"])


def _bounds_doc(opts) -> dict:
    return {"max_weight": opts["weight"], "max_letters": opts["max_letters"], "fermion_range": list(opts["fermion_range"])}


def _poisson(T: NambuTensor) -> PoissonTensor:
    if T.order != 2:
        raise InputError("this command needs an order-2 tensor")
    return T.as_poisson()


def _word_text(word) -> str:
    from .field_algebra import StatePolynomial

    n = max((g.index for g in word), default=1)
    return render_state(StatePolynomial._raw(n, {(word, 0): 1}))


def _cells_doc(report, render) -> list[dict]:
    return [
        {
            "grading": list(cell.grading),
            "dim": cell.dim,
            "kernel_dim": cell.kernel_dim,
            "image_dim": cell.image_dim,
            "truncated": cell.truncated,
            "representatives": [render(r) for r in cell.representatives],
        }
        for cell in report.nonzero()
    ]


def cmd_check_jacobi(T, opts, doc):
    P = _poisson(T)
    ok, res = jacobi_check(P)
    A = P.as_multivector()
    sch = schouten(A, A)
    doc["checks"].append(_check("jacobi", ok, {"residual": render_state(to_state(res))}))
    doc["checks"].append(_check("schouten_agrees", ok == sch.is_zero(), {"schouten_zero": sch.is_zero()}))


def cmd_lp_cohomology(T, opts, doc):
    P = _poisson(T)
    ok, _ = jacobi_check(P)
    doc["checks"].append(_check("jacobi", ok))
    if not ok:
        return
    rep = lp_cohomology(P, opts["max_poly_degree"])
    doc["grading"] = list(rep.grading)
    doc["max_poly_degree"] = opts["max_poly_degree"]
    doc["total_dims"] = {str(k): v for k, v in rep.total_dims(0).items()}
    doc["truncated"] = rep.truncated
    doc["cells"] = _cells_doc(rep, lambda A: render_state(to_state(A)))


def _generator(T: NambuTensor, opts) -> QuantumGenerator:
    if T.order == 2:
        from .quantum import build_generator

        return build_generator(T.as_poisson(), opts["convention"])
    if T.order % 2:
        raise InputError(f"no quantum generator for odd order {T.order}")
    return QuantumGenerator(T, nambu_density(T), opts["convention"])


def _structure_check(T: NambuTensor, doc) -> bool:
    if T.order == 2:
        ok, _ = jacobi_check(T.as_poisson())
        doc["checks"].append(_check("jacobi", ok))
    else:
        A = T.as_multivector()
        ok = schouten(A, A).is_zero()
        doc["checks"].append(_check("schouten_zero", ok))
    return ok


def cmd_build_operator(T, opts, doc):
    _structure_check(T, doc)
    G = _generator(T, opts)
    doc["density"] = render_state(G.density)
    ok, witness = check_generator_self_ope(G)
    doc["checks"].append(
        _check("self_ope_total_derivative", ok, {"witness": render_state(witness) if witness is not None else None})
    )


def cmd_qcohomology(T, opts, doc):
    if not _structure_check(T, doc):
        return
    G = _generator(T, opts)
    rep = quantum_cohomology(G, opts["page"], _bounds(opts))
    doc["truncation"] = _bounds_doc(opts)
    doc["grading"] = list(rep.grading)
    doc["letter_shift"] = rep.metadata["letter_shift"]
    doc["total_dims"] = {str(k): v for k, v in rep.total_dims(0).items()}
    doc["truncated"] = rep.truncated
    doc["cells"] = _cells_doc(rep, render_state)


def cmd_verify_nilpotent(T, opts, doc):
    _structure_check(T, doc)
    G = _generator(T, opts)
    rep = check_nilpotency(G, _bounds(opts), page=opts["page"])
    doc["truncation"] = _bounds_doc(opts)
    doc["page"] = opts["page"]
    detail = {
        "checked": rep.checked,
        "violations": {str(h): [_word_text(w) for w in ws[:10]] for h, ws in rep.violations.items()},
        "violation_counts": {str(h): len(ws) for h, ws in rep.violations.items()},
    }
    doc["checks"].append(_check("nilpotent", rep.passed, detail))


def cmd_verify_chiral(T, opts, doc):
    _structure_check(T, doc)
    G = _generator(T, opts)
    reports = check_chiral_compat(G, _bounds(opts), conventions=(opts["convention"],))
    doc["truncation"] = _bounds_doc(opts)
    for name, r in reports.items():
        doc["checks"].append(_check("delta_squared", r.delta_squared_ok, {"checked": r.checked, "failures": len(r.delta_squared_failures)}))
        doc["checks"].append(_check("supercommutator", r.commutator_ok, {"checked": r.checked, "failures": len(r.commutator_failures)}))


def cmd_nambu_check(T, opts, doc):
    n, r = T.n, T.order
    if r == 2:
        ok, _ = jacobi_check(T.as_poisson())
        doc["checks"].append(_check("jacobi", ok))
    else:
        ok, rep = takhtajan_check(T)
        detail = {"algebraic_failures": len(rep.algebraic), "differential_failures": len(rep.differential)}
        doc["checks"].append(_check("takhtajan", ok, detail))
    rng = random.Random(opts["seed"])
    br = bracket_of(T)
    leib = True
    for _ in range(opts["trials"]):
        fs = [random_poly(rng, n) for _ in range(r + 1)]
        leib &= leibniz_check(br, fs[0], fs[1], fs[2:]).vanishes
    doc["checks"].append(_check("leibniz", leib, {"trials": opts["trials"], "seed": opts["seed"]}))
    if r == 3:
        fil = True
        for _ in range(opts["trials"]):
            fs = [random_poly(rng, n) for _ in range(5)]
            fil &= filippov_check(br, *fs).vanishes
        doc["checks"].append(_check("filippov", fil, {"trials": opts["trials"], "seed": opts["seed"]}))
    if r % 2 == 0 and r > 2:
        res = even_order_bridge(T, _bounds(opts), opts["convention"])
        doc["checks"].append(_check("schouten_zero", res.schouten_zero))
        if res.built:
            nil = res.nilpotency
            doc["checks"].append(
                _check(
                    "bridge_nilpotent",
                    nil.passed,
                    {"experimental": True, "checked": nil.checked, "violation_counts": {str(h): len(v) for h, v in nil.violations.items()}},
                )
            )


HANDLERS = {
    "check-jacobi": cmd_check_jacobi,
    "lp-cohomology": cmd_lp_cohomology,
    "build-operator": cmd_build_operator,
    "qcohomology": cmd_qcohomology,
    "verify-nilpotent": cmd_verify_nilpotent,
    "verify-chiral": cmd_verify_chiral,
    "nambu-check": cmd_nambu_check,
}


# -- output --------------------------------------------------------------------


def render_text(doc: dict) -> str:
    lines = [f"command: {doc['command']}"]
    if "tensor" in doc:
        t = doc["tensor"]
        lines.append(f"tensor: dim {t['dim']}, order {t['order']}")
        for k, v in t["entries"].items():
            lines.append(f"  {k} = {v}")
    if "error" in doc:
        lines.append(f"error: {doc['error']}")
    lines.append(f"convention: {doc.get('convention')}")
    if "truncation" in doc:
        tr = doc["truncation"]
        lines.append(f"truncation: weight <= {tr['max_weight']}, letters <= {tr['max_letters']}, fermion in {tr['fermion_range']}")
    if "density" in doc:
        lines.append(f"density: {doc['density']}")
    for chk in doc.get("checks", []):
        status = "PASS" if chk["passed"] else "FAIL"
        extra = ""
        if "detail" in chk:
            extra = "  " + json.dumps(chk["detail"], sort_keys=True)
        lines.append(f"{status} {chk['name']}{extra}")
    if "total_dims" in doc:
        lines.append(f"total dims by {doc['grading'][0]}: {doc['total_dims']}")
    for cell in doc.get("cells", []):
        flag = " (truncated)" if cell["truncated"] else ""
        lines.append(f"cell {tuple(cell['grading'])}: dim {cell['dim']}{flag}")
        for r in cell["representatives"]:
            lines.append(f"    {r}")
    lines.append(f"result: {'pass' if doc['passed'] else 'fail'}")
    return "\n".join(lines) + "\n"


def serialize(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return render_text(doc)


def _execute(argv) -> tuple[dict, int, dict]:
    args = build_parser().parse_args(argv)
    doc = {"schema": SCHEMA, "command": args.command, "checks": []}
    opts = {"format": args.format or "text", "out": args.out}
    try:
        opts = resolve_options(args)
        doc["convention"] = opts["convention"]
        T = parse_tensor(opts.get("dim"), opts["entry"], opts.get("order"))
        doc["tensor"] = {
            "dim": T.n,
            "order": T.order,
            "entries": {f"P[{','.join(map(str, k))}]": render_poly(v) for k, v in T.components.items()},
        }
        HANDLERS[args.command](T, opts, doc)
    except (InputError, ParseError, DimensionMismatch, OSError) as exc:
        doc["error"] = str(exc)
        doc["passed"] = False
        return doc, 2, opts
    doc["passed"] = all(c["passed"] for c in doc["checks"])
    return doc, (0 if doc["passed"] else 1), opts


def run(argv=None) -> tuple[dict, int]:
    """Parse ``argv``, run the command and return (report, exit status)."""
    doc, status, _ = _execute(argv)
    return doc, status


def main(argv=None) -> int:
    doc, status, opts = _execute(argv)
    text = serialize(doc, opts.get("format", "text"))
    sys.stdout.write(text)
    if opts.get("out"):
        Path(opts["out"]).write_text(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
