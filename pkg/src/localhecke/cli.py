"""Command-line interface: ``localhecke <command> ...``.

Exit codes: 0 when every verification passes, 1 on a verification
discrepancy, 2 on bad input (flags, descriptors, missing files), 3 when a
finite enumeration would exceed ``--budget``.
"""

from __future__ import annotations

import argparse
import json
import sys

from .closefields import CloseFieldPair, family_hecke, family_to_json, verify_algebra_iso
from .family import Family
from .hecke import DEFAULT_BUDGET, BudgetError, DoubleCoset, HeckeAlgebra, HeckeError
from .localfield import FieldError, PrecisionError, close_field_iso, load_field
from .lubin_tate import ClassicalLT, LubinTate, torsion_tower
from .witt import law_polynomials, specialize_check


class InputError(ValueError):
    """Bad command-line input that argparse cannot detect."""


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _coeff_text(R, rep):
    """Small signed integer if the coefficient is one, else its digit list."""
    for k in range(0, 9):
        for s in (k, -k):
            if R.from_int(s) == rep:
                return str(s)
    return str(R.digits(rep))


def _formula(pr, poly, R):
    terms = []
    for mono, rep in sorted(poly.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0]))):
        name = "*".join(
            (pr.names[i] if e == 1 else f"{pr.names[i]}^{e}") for i, e in enumerate(mono) if e
        ) or "1"
        c = _coeff_text(R, rep)
        if c == "1":
            terms.append(f"+ {name}")
        elif c == "-1":
            terms.append(f"- {name}")
        elif c.startswith("-"):
            terms.append(f"- {c[1:]}*{name}")
        else:
            terms.append(f"+ {c}*{name}")
    if not terms:
        return "0"
    s = " ".join(terms)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _poly_digits(R, coeffs):
    return [R.digits(c) for c in coeffs]


# ---------------------------------------------------------------------------
# commands

def cmd_field(args):
    F = load_field(args.field)
    if args.action == "info":
        d = F.describe()
        d["name"] = F.name
        d["q"] = F.q
        out, ok = d, True
        text = "\n".join(f"{k}: {d[k]}" for k in sorted(d))
    else:
        target = load_field(args.target) if args.target else None
        iso = close_field_iso(F, args.level, target)
        ok = iso.verify()
        out = {"source": F.name, "target": iso.target.name, "level": args.level, "isomorphism": ok,
               "pi_digits": iso(iso.R.elem(iso.R.pi)).digits() if args.level else []}
        text = f"{F.name} -> {iso.target.name} at level {args.level}: {'ok' if ok else 'FAILED'}"
    return out, text, ok


def cmd_witt(args):
    F = load_field(args.field)
    table = law_polynomials(F, args.n, args.precision)
    out = table.as_json()
    R = F.ring(args.precision)
    out["formulas"] = {
        "sum": [_formula(table.pr, s, R) for s in table.S],
        "product": [_formula(table.pr, p, R) for p in table.P],
        "negation": [_formula(table.pr, x, R) for x in table.N],
    }
    ok = table.ghost_consistent()
    out["ghost_consistent"] = ok
    if F.is_mixed and F.e == 1 and F.f == 1:
        chk = specialize_check(F, args.n, args.precision)
        out["classical_match"] = chk["match"]
        ok = ok and chk["match"]
    lines = [f"Witt laws for {F.name}, n = {args.n}, modulo pi^{args.precision}"]
    for key in ("sum", "product", "negation"):
        for j, f in enumerate(out["formulas"][key]):
            lines.append(f"  {key[0].upper()}_{j} = {f}")
    lines.append(f"ghost consistent: {out['ghost_consistent']}")
    if "classical_match" in out:
        lines.append(f"matches classical p-typical laws: {out['classical_match']}")
    return out, "\n".join(lines), ok


def _scalar(text):
    if text == "pi":
        return "pi"
    try:
        return int(text)
    except ValueError:
        raise InputError(f"scalar must be an integer or 'pi', got {text!r}")


def cmd_lt(args):
    F = load_field(args.field)
    M = args.precision
    if args.action in ("log", "mult", "check"):
        D = args.degree if args.degree is not None else F.q ** 2
        lt = LubinTate(F, D, M, prec=args.relative_precision)
    if args.action == "log":
        out = {"field": F.name, "degree": D, "log": lt.log().as_digits(), "exp": lt.exp().as_digits()}
        text = "\n".join(f"log {k}: {v}" for k, v in out["log"].items())
        return out, text, True
    if args.action == "mult":
        a = _scalar(args.scalar)
        s = lt.mult(a)
        out = {"field": F.name, "degree": D, "precision": M, "scalar": args.scalar, "series": s.as_digits(M)}
        text = "\n".join(f"[{args.scalar}] {k}: {v}" for k, v in out["series"].items())
        return out, text, True
    if args.action == "check":
        fp = lt.check_f_pi()
        grp = lt.check_group_law()
        comp = lt.check_mult_composition()
        res = {
            "log_f_pi": lt.check_log_f(),
            "exp_log": lt.check_exp_log(),
            "f_pi": fp,
            "group_law": grp,
            "inverse": lt.check_inverse(),
            "mult_composition": {f"{a}*{b}": v for (a, b), v in comp.items()},
        }
        ok = (res["log_f_pi"] and res["exp_log"] and all(fp.values()) and all(grp.values())
              and res["inverse"] and all(comp.values()))
        out = {"field": F.name, "degree": D, "precision": M, "checks": res, "ok": ok}
        text = "\n".join(f"{k}: {v}" for k, v in res.items())
        return out, text, ok
    # torsion / tower
    T = torsion_tower(F, args.level, M, D=args.degree, classical=not args.canonical)
    R = F.ring(M)
    if args.action == "torsion":
        out = {"field": F.name, "level": args.level, "precision": M,
               "g": [_poly_digits(R, g) for g in T.g], "degrees": T.degrees(),
               "torsion_count": T.torsion_count()}
        ok = T.torsion_count() == F.q ** args.level
        text = "\n".join(f"g_{j + 1}: degree {len(g) - 1}, coefficients {_poly_digits(R, g)}" for j, g in enumerate(T.g))
        return out, text, ok
    rep = T.check()
    lim = T.limit_check()
    unit = []
    if args.level:
        source = LubinTate(F, T.D, M) if args.canonical else ClassicalLT(F, T.D, M)
        units = [u for u in range(1, 2 * F.p ** 2) if u % F.p] if F.is_mixed else list(range(1, F.p))
        for u in units:
            ser = source.mult(u).reduce_integral(M)
            r = T.unit_action(ser, u)
            unit.append({"u": u, "root": r["root_of_g_n"], "fixes": r["fixes_t_n"],
                         "trivial_mod_pi_n": r["u_is_1_mod_pi^n"], "ok": r["ok"]})
    ok = rep["ok"] and lim["ok"] and all(u["ok"] for u in unit)
    out = {"field": F.name, "level": args.level, "precision": M, "tower": rep, "limit": lim,
           "unit_action": unit, "ok": ok}
    text = "\n".join([f"{k}: {v}" for k, v in rep.items()] + [f"limit: {lim['ok']}", f"unit action: {all(u['ok'] for u in unit)}"])
    return out, text, ok


def _parse_coset(text: str, alg: HeckeAlgebra) -> DoubleCoset:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"coset is not valid JSON: {exc}")
    if not isinstance(d, dict) or "nu" not in d:
        raise InputError("coset must be an object with key 'nu'")
    if not d.get("residue"):
        return alg.nabla(tuple(int(x) for x in d["nu"]))
    return alg.validate(DoubleCoset.from_json(d, alg.q))


def cmd_hecke(args):
    F = load_field(args.field)
    alg = HeckeAlgebra(F, args.rank, args.level, args.budget)
    a = _parse_coset(args.a, alg)
    b = _parse_coset(args.b, alg)
    terms = alg.basis_product(a, b)
    ok = alg.mass_check(a, b)
    q, n = F.q, args.level
    out = {"terms": [{"coset": d.to_json(q, n), "coeff": c} for d, c in sorted(terms.items())],
           "mass_conservation": ok}
    text = "\n".join(f"{c} * {d.to_json(q, n)}" for d, c in sorted(terms.items()))
    return out, text, ok


def cmd_close_verify(args):
    A, B = load_field(args.field_a), load_field(args.field_b)
    pair = CloseFieldPair(A, B, args.rank, args.level, args.budget)
    rep = verify_algebra_iso(pair, args.bound, args.depth)
    s = rep["summary"]
    text = "\n".join(f"{k}: {s[k]}" for k in sorted(s))
    return rep, text, s["all_equal"]


def cmd_family_hecke(args):
    tail = load_field(args.tail)
    Es = [load_field(x) for x in args.fields]
    res = family_hecke(Es, tail, args.level, args.rank, args.bound, args.budget)
    fam: Family = res["family"]
    out = {"family": family_to_json(fam, tail.q, args.level),
           "indices": {str(i): Es[i].name for i in res["indices"]},
           "verified_indices": res["verified_indices"],
           "exceptions": sorted(fam.exceptions)}
    ok = len(res["verified_indices"]) == len(Es)
    text = (f"tail: {tail.name}; indices: {[e.name for e in Es]}; "
            f"exceptions: {sorted(fam.exceptions)}; verified: {res['verified_indices']}")
    return out, text, ok


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="localhecke", description="Local fields, Witt vectors, Lubin-Tate groups and Hecke algebras.")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cap on enumerated group elements")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    f = sub.add_parser("field", help="field descriptors and close-field isomorphisms")
    f.add_argument("action", choices=["info", "iso"])
    f.add_argument("--field", required=True)
    f.add_argument("--target")
    f.add_argument("--level", type=int, default=1)
    common(f)
    f.set_defaults(func=cmd_field)

    w = sub.add_parser("witt", help="Witt vector law polynomials")
    w.add_argument("action", choices=["laws"])
    w.add_argument("--field", required=True)
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--precision", type=int, default=4)
    common(w)
    w.set_defaults(func=cmd_witt)

    lt = sub.add_parser("lt", help="Lubin-Tate series and torsion towers")
    lt.add_argument("action", choices=["log", "mult", "check", "torsion", "tower"])
    lt.add_argument("--field", required=True)
    lt.add_argument("--degree", type=int)
    lt.add_argument("--precision", type=int, default=4)
    lt.add_argument("--relative-precision", type=int)
    lt.add_argument("--scalar", default="pi")
    lt.add_argument("--level", type=int, default=2)
    lt.add_argument("--canonical", action="store_true", help="use f_pi = exp(pi log X) instead of pi X + X^q")
    common(lt)
    lt.set_defaults(func=cmd_lt)

    h = sub.add_parser("hecke", help="Hecke algebra convolution")
    h.add_argument("action", choices=["convolve"])
    h.add_argument("--field", required=True)
    h.add_argument("--rank", type=int, default=2)
    h.add_argument("--level", type=int, default=0)
    h.add_argument("--a", required=True, help='coset JSON, e.g. {"nu": [1, 0]}, or @file')
    h.add_argument("--b", required=True)
    common(h)
    h.set_defaults(func=cmd_hecke)

    c = sub.add_parser("close-verify", help="compare Hecke algebras of close fields")
    c.add_argument("--field-a", required=True)
    c.add_argument("--field-b", required=True)
    c.add_argument("--rank", type=int, default=2)
    c.add_argument("--level", type=int, default=0)
    c.add_argument("--bound", type=int, default=1)
    c.add_argument("--depth", type=int, default=2)
    common(c)
    c.set_defaults(func=cmd_close_verify)

    fh = sub.add_parser("family-hecke", help="family of structure-constant tables")
    fh.add_argument("--fields", nargs="*", default=[])
    fh.add_argument("--tail", required=True)
    fh.add_argument("--rank", type=int, default=2)
    fh.add_argument("--level", type=int, default=1)
    fh.add_argument("--bound", type=int, default=1)
    common(fh)
    fh.set_defaults(func=cmd_family_hecke)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, text, ok = args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FileNotFoundError, FieldError, HeckeError, InputError, PrecisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(_dump(out) if args.json else text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
