"""Command-line entry point: ``simvol <command> [flags]``.

Every command prints one JSON report (or writes it to ``--out``).  Exit codes:
0 when all checks pass, 1 when a property check fails, 2 on input errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from .chains import (
    Chain, alt, boundary, chain_from_json, chain_to_json, l1_norm, norm_e, norm_ne,
)
from .complex import ComplexError, DeltaComplex, UnknownMark, parse_rational, rational_json
from .diffusion import DiffusionError, diffuse_chain, edge_swap_action, multi_orbit_diffuse, orbit_sums, push
from .gluing import (
    GluingError, GluingMap, PipelineError, connected_sum, glue_complexes, subadditivity_pipeline,
)
from .groups import ActionError, GroupError, action_from_json, l1
from .lp import LPError
from .patterns import PatternError
from .refine import iterate_subdivision
from .seminorm import ClassSpec, NonOrientable, NotACycle, certificate_problems, fundamental_cycle, l1_seminorm
from .subdivision import barycentric, local_barycentric
from .suites import SUITES, run_suite

INPUT_ERRORS = (ComplexError, UnknownMark, GluingError, PatternError, NonOrientable, NotACycle, ActionError,
                GroupError, ValueError, KeyError, OSError, json.JSONDecodeError)


class InputError(Exception):
    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(message)


def num(x) -> dict:
    x = Fraction(x)
    return {"exact": rational_json(x), "decimal": f"{float(x):.12g}"}


class Report:
    def __init__(self, command: str, argv: list):
        self.data = {"command": command, "argv": list(argv), "inputs": {}, "outputs": {}, "checks": []}

    def input(self, name: str, path: str) -> bytes:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise InputError("input", f"cannot read {name} file {path!r}: {exc.strerror}") from None
        self.data["inputs"][name] = {"path": path, "sha256": hashlib.sha256(raw).hexdigest()}
        return raw

    def load_json(self, name: str, path: str):
        try:
            return json.loads(self.input(name, path))
        except json.JSONDecodeError as exc:
            raise InputError("input", f"{name} file {path!r} is not JSON: {exc}") from None

    def check(self, name: str, ok: bool, detail: str | None = None) -> None:
        entry = {"name": name, "pass": bool(ok)}
        if detail:
            entry["detail"] = detail
        self.data["checks"].append(entry)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.data["checks"])

    def emit(self, out: str | None, code: int) -> None:
        self.data["ok"] = code == 0
        text = json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"
        if out:
            Path(out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)


def _complex(rep: Report, path: str, name: str = "complex") -> DeltaComplex:
    return DeltaComplex.from_json(rep.load_json(name, path))


def _class_chain(rep: Report, K: DeltaComplex, cls: str, degree: int | None, relative: str | None) -> Chain:
    if cls == "fund":
        return fundamental_cycle(K, degree, relative)
    c = chain_from_json(K, rep.load_json("class", cls))
    if degree is not None and c.degree != degree:
        raise InputError("input", f"class file has degree {c.degree}, --degree says {degree}")
    return c


def _norms(c: Chain, mark: str | None) -> dict:
    out = {"l1": num(l1_norm(c)), "terms": len(c)}
    if mark:
        out["eZ"] = num(norm_e(c, mark))
        out["neZ"] = num(norm_ne(c, mark))
    return out


# commands


def cmd_seminorm(a, rep: Report) -> None:
    K = _complex(rep, a.complex)
    z = _class_chain(rep, K, a.cls, a.degree, a.mark)
    if a.subdivide:
        K, z = iterate_subdivision(K, z, a.subdivide)
    query = ClassSpec(K, z.degree, z, a.mark)
    cert = l1_seminorm(query)
    problems = certificate_problems(cert, query)
    rep.data["outputs"] = {
        "kind": "complex-level seminorm",
        "degree": z.degree,
        "relative": a.mark,
        "subdivisions": a.subdivide,
        "f_vector": [len(K.cells_of_dim(i)) for i in range(K.dim + 1)],
        "value": num(cert.value),
        "representative_l1": num(l1_norm(z)),
        "pivots": cert.pivots,
        "certificate": cert.to_json(),
    }
    rep.check("certificate verifies", not problems, "; ".join(problems) or None)
    rep.check("value <= |representative|_1", cert.value <= l1_norm(z))


def cmd_verify(a, rep: Report) -> None:
    results = run_suite(a.suite, a.trials, a.seed, a.max_dim)
    rep.data["outputs"] = {"suite": a.suite, "seed": a.seed, "trials": a.trials, "max_dim": a.max_dim,
                           "properties": [r.to_json() for r in results]}
    for r in results:
        rep.check(r.name, r.passed, r.failures[0] if r.failures else None)


def cmd_subdivide(a, rep: Report) -> None:
    K = _complex(rep, a.complex)
    c = _class_chain(rep, K, a.cls, a.degree, None)
    if a.mark:
        K.mark(a.mark)

    def T(x):
        return local_barycentric(x, a.mark) if a.mark else barycentric(x)

    out = c
    for _ in range(a.subdivide or 1):
        out = T(out)
    rep.data["outputs"] = {"operator": f"S_{a.mark}" if a.mark else "S", "times": a.subdivide or 1,
                           "input": _norms(c, a.mark), "output": _norms(out, a.mark), "chain": chain_to_json(out)}
    if c.degree > 0:
        lhs, rhs = boundary(T(c)), T(boundary(c))
        rep.check("boundary commutes with the operator", lhs == rhs)
    if a.mark:
        rep.check("|T c|^ne <= |c|^ne after one step", norm_ne(T(c), a.mark) <= norm_ne(c, a.mark))


def _read_function(rep: Report, path: str) -> dict:
    data = rep.load_json("function", path)
    try:
        f = {}
        for x, v in data["values"]:
            x = tuple(x) if isinstance(x, list) else x
            f[x] = f.get(x, Fraction(0)) + parse_rational(v)
    except (KeyError, TypeError) as exc:
        raise InputError("input", f"malformed function JSON: {exc}") from None
    return f


def cmd_diffuse(a, rep: Report) -> None:
    eps = parse_rational(a.eps)
    if eps <= 0:
        raise InputError("input", "--eps must be positive")
    if a.function:
        if not a.action:
            raise InputError("input", "--function needs --action")
        A = action_from_json(rep.load_json("action", a.action))
        f = _read_function(rep, a.function)
        mu = multi_orbit_diffuse(f, A, eps)
        g = push(mu, f, A)
        bound = eps + sum((abs(t) for _, t in orbit_sums(f, A)), Fraction(0))
        rep.data["outputs"] = {"mode": "function", "eps": num(eps), "input_l1": num(l1(f)), "output_l1": num(l1(g)),
                               "bound": num(bound), "measure_support": len(mu)}
        rep.check("|mu*f|_1 <= eps + sum over orbits |sum f|", l1(g) <= bound)
        return
    K = _complex(rep, a.complex)
    mark = a.mark or "Z"
    K.mark(mark)
    c = _class_chain(rep, K, a.cls, a.degree, None)
    if a.alt:
        c = alt(c)
    res = diffuse_chain(c, edge_swap_action(mark), eps, mark)
    rep.data["outputs"] = {"mode": "chain", "eps": num(eps), "antisymmetrized": a.alt, "input": _norms(c, mark),
                           "output": _norms(res, mark), "chain": chain_to_json(res)}
    rep.check("|mu*c|_1 <= |c|^ne + eps", l1_norm(res) <= norm_ne(c, mark) + eps)
    rep.check("ne part unchanged", norm_ne(res, mark) == norm_ne(c, mark))


def _gluing(rep: Report, a):
    K1 = _complex(rep, a.k1, "k1")
    K2 = _complex(rep, a.k2, "k2")
    f = GluingMap.from_json(K1, K2, rep.load_json("glue", a.glue))
    return K1, K2, f


def cmd_glue(a, rep: Report) -> None:
    K1, K2, f = _gluing(rep, a)
    G = glue_complexes(K1, K2, f)
    Z = K1.mark(f.source)
    chiZ = sum((-1) ** K1.cell_dim(c) for c in Z)
    rep.data["outputs"] = {
        "f_vector": [len(G.cells_of_dim(i)) for i in range(G.dim + 1)],
        "euler_characteristic": G.euler_characteristic(),
        "complex": G.to_json(),
    }
    rep.check("χ(glued) = χ(K1) + χ(K2) - χ(Z)",
              G.euler_characteristic() == K1.euler_characteristic() + K2.euler_characteristic() - chiZ)


def cmd_consum(a, rep: Report) -> None:
    K1 = _complex(rep, a.k1, "k1")
    K2 = _complex(rep, a.k2, "k2")
    G = connected_sum(K1, K2)
    z = fundamental_cycle(G)
    cert = l1_seminorm(ClassSpec(G, G.dim, z))
    n = G.dim
    rep.data["outputs"] = {
        "f_vector": [len(G.cells_of_dim(i)) for i in range(n + 1)],
        "seminorm": num(cert.value),
        "kind": "complex-level seminorm",
        "complex": G.to_json(),
    }
    rep.check("top cell count = |K1| + |K2| - 2",
              len(G.cells_of_dim(n)) == len(K1.cells_of_dim(n)) + len(K2.cells_of_dim(n)) - 2)
    rep.check("certificate verifies", not certificate_problems(cert, ClassSpec(G, n, z)))


def cmd_pipeline(a, rep: Report) -> None:
    K1, K2, f = _gluing(rep, a)
    eps = parse_rational(a.eps)
    if eps <= 0:
        raise InputError("input", "--eps must be positive")
    rel = a.mark or "Y"
    c1 = fundamental_cycle(K1, K1.dim, rel)
    c2 = fundamental_cycle(K2, K2.dim, rel)
    _, report = subadditivity_pipeline(K1, K2, f, c1, c2, eps=eps, orient=True)
    rep.data["outputs"] = report
    for c in report["checks"]:
        rep.check(c["name"], c["holds"])


COMMANDS = {"seminorm": cmd_seminorm, "verify": cmd_verify, "subdivide": cmd_subdivide, "diffuse": cmd_diffuse,
            "glue": cmd_glue, "consum": cmd_consum, "pipeline": cmd_pipeline}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simvol", description="Exact chain operators, diffusion and l1-seminorms.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")

    s = sub.add_parser("seminorm", help="l1-seminorm of a (relative) class on a fixed complex")
    s.add_argument("--complex", required=True)
    s.add_argument("--class", dest="cls", default="fund", help="'fund' or a chain JSON file")
    s.add_argument("--degree", type=int)
    s.add_argument("--mark", help="compute relative to this mark")
    s.add_argument("--subdivide", type=int, default=0, help="barycentric subdivisions of the complex first")
    common(s)

    s = sub.add_parser("verify", help="run a seeded property suite")
    s.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-dim", type=int, default=3)
    common(s)

    s = sub.add_parser("subdivide", help="apply S (or S_Z with --mark) to a chain")
    s.add_argument("--complex", required=True)
    s.add_argument("--class", dest="cls", default="fund")
    s.add_argument("--degree", type=int)
    s.add_argument("--mark")
    s.add_argument("--subdivide", type=int, default=1, help="number of applications")
    common(s)

    s = sub.add_parser("diffuse", help="diffuse a chain (edge-swap action) or a function (given action)")
    s.add_argument("--complex")
    s.add_argument("--class", dest="cls", default="fund")
    s.add_argument("--degree", type=int)
    s.add_argument("--mark")
    s.add_argument("--alt", action="store_true", help="antisymmetrize the chain first")
    s.add_argument("--function")
    s.add_argument("--action")
    s.add_argument("--eps", required=True)
    common(s)

    for name, helptext in (("glue", "glue two complexes along a gluing map"),
                           ("pipeline", "glue relative fundamental cycles and run the subadditivity pipeline")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--k1", required=True)
        s.add_argument("--k2", required=True)
        s.add_argument("--glue", required=True)
        if name == "pipeline":
            s.add_argument("--eps", required=True)
            s.add_argument("--mark", help="relative mark of the input cycles (default Y)")
        common(s)

    s = sub.add_parser("consum", help="connected sum of two closed oriented pseudo-manifolds")
    s.add_argument("--k1", required=True)
    s.add_argument("--k2", required=True)
    common(s)
    return p


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.command == "diffuse" and not args.function and not args.complex:
        build_parser().error("diffuse needs --complex or --function")
    rep = Report(args.command, argv)
    code = 0
    try:
        COMMANDS[args.command](args, rep)
        code = 0 if rep.ok else 1
    except InputError as exc:
        rep.data["error"] = {"stage": exc.stage, "message": str(exc)}
        code = 2
    except PipelineError as exc:
        rep.data["error"] = {"stage": f"gluing.{exc.stage}", "message": str(exc)}
        code = 2
    except (DiffusionError, LPError) as exc:
        rep.data["error"] = {"stage": type(exc).__module__.rsplit(".", 1)[-1], "message": str(exc)}
        code = 1
    except INPUT_ERRORS as exc:
        module = type(exc).__module__
        stage = module.rsplit(".", 1)[-1] if module.startswith("simvol.") else "input"
        rep.data["error"] = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
        code = 2
    rep.emit(args.out, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
