"""Command-line front end: ``lcn <subcommand> --n N ...``.

Exit codes: 0 success, 1 a verified property failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import detlab, structure
from .canon import canonicalize
from .monoid import build_universe, enumerate_canonical
from .oracle import catalan_presentation, coset_enumeration, congruence_classes, lc_presentation
from .words import Word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    n: int
    seed: int = 0
    trials: int = 32
    fmt: str = "text"
    output: str | None = None


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _parse_word(text: str, n: int) -> Word:
    try:
        return Word.parse(text, n)
    except ValueError as exc:
        raise UsageError(f"bad word {text!r}: {exc}") from None


# -- subcommands -------------------------------------------------------------------

def cmd_elements(args) -> tuple[str, int]:
    u = build_universe(args.n)
    if args.format == "csv":
        lines = [",".join([""] + [str(t) for t in range(u.size)])]
        for s in range(u.size):
            lines.append(",".join([str(s)] + [str(int(v)) for v in u.mult[s]]))
        return "\n".join(lines) + "\n", EXIT_OK
    rows = [{"id": e.id, "word": str(e.word), "kind": e.form.kind.value} for e in u]
    if args.format == "json":
        return _dump(rows), EXIT_OK
    return "".join(f"{r['id']}\t{r['word']}\t{r['kind']}\n" for r in rows), EXIT_OK


def cmd_canon(args) -> tuple[str, int]:
    form = canonicalize(_parse_word(args.word, args.n))
    if args.format == "json":
        return _dump(form.to_json()), EXIT_OK
    return f"{form}\n", EXIT_OK


def cmd_mult(args) -> tuple[str, int]:
    u = build_universe(args.n)
    a = u.id_of(_parse_word(args.left, args.n))
    b = u.id_of(_parse_word(args.right, args.n))
    p = u.element(u.mul(a, b))
    if args.format == "json":
        return _dump({"left": u.label(a), "right": u.label(b), "product": p.form.to_json()}), EXIT_OK
    return f"{p}\n", EXIT_OK


def cmd_cayley(args) -> tuple[str, int]:
    u = build_universe(args.n)
    table = detlab.contracted_cayley(u) if args.contracted else detlab.cayley_table(u)
    if args.format == "json":
        return _dump({"n": args.n, "contracted": args.contracted, **table.to_json(u)}), EXIT_OK
    return table.to_csv(u), EXIT_OK


def cmd_idempotents(args) -> tuple[str, int]:
    u = build_universe(args.n)
    rows = []
    for e in structure.idempotents(u):
        rows.append({
            "id": e,
            "word": u.label(e),
            "l_tilde": [str(x.word) for x in structure.l_tilde(u, e)],
            "r_tilde": [str(x.word) for x in structure.r_tilde(u, e)],
        })
    if args.format == "json":
        return _dump(rows), EXIT_OK
    return "".join(f"{r['word']}\t|L~|={len(r['l_tilde'])}\t|R~|={len(r['r_tilde'])}\n" for r in rows), EXIT_OK


def cmd_poset(args) -> tuple[str, int]:
    u = build_universe(args.n)
    mu = detlab.mobius(u)
    edges = [[u.label(t), u.label(s)] for t, s in structure.ll_edges(u)]
    mob = [[u.label(t), u.label(s), v] for (t, s), v in sorted(mu.values.items())]
    if args.format == "json":
        return _dump({"n": args.n, "order": [u.label(i) for i in mu.order],
                      "edges": edges, "mobius": mob}), EXIT_OK
    out = [f"{t} << {s}\n" for t, s in edges]
    out += [f"mu({t}, {s}) = {v}\n" for t, s, v in mob]
    return "".join(out), EXIT_OK


def cmd_blocks(args) -> tuple[str, int]:
    u = build_universe(args.n)
    es = [u.id_of(_parse_word(args.e, args.n))] if args.e else structure.idempotents(u)
    blocks = []
    for e in es:
        if not structure.is_idempotent(u, e) or u.is_zero(e):
            raise UsageError(f"--e {args.e}: not a non-zero idempotent")
        blocks.append(detlab.block_table_json(u, e))
    if args.format == "json":
        return _dump(blocks), EXIT_OK
    parts = []
    for e, b in zip(es, blocks):
        parts.append(f"# e = {b['e']}\n" + detlab.star_block(u, e).to_csv(u))
    return "\n".join(parts), EXIT_OK


def cmd_det(args) -> tuple[str, int]:
    u = build_universe(args.n)
    start = time.perf_counter()
    res = detlab.theta_nonzero(u, trials=args.trials, seed=args.seed, cap=args.symbolic_cap)
    print(f"det: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    fmt = args.report or args.format
    if fmt == "json":
        return _dump(res.to_json()), EXIT_OK
    lines = [f"n = {res.rank}", f"verdict: {res.verdict.value}", f"trials: {res.trials} (mod {res.modulus})"]
    if res.value is not None:
        lines.append(f"value at certificate point: {res.value}")
    if res.block is not None:
        lines.append(f"singular block: e = {res.block['e']}")
        for r, row in zip(res.block["rows"], res.block["entries"]):
            lines.append(f"  {r}: " + " ".join(row))
    return "\n".join(lines) + "\n", EXIT_OK


def run_verify(n: int, seed: int = 0, samples: int = 100_000, trials: int = 32) -> list[dict]:
    """The property suite for one rank; each entry has name, passed and details."""
    u = build_universe(n)
    m = u.mult.astype(np.int64)
    ids = np.arange(u.size)
    out: list[dict] = []

    def add(name, passed, **details):
        out.append({"name": name, "passed": bool(passed), "details": details})

    if u.size <= 70:
        assoc = all(np.array_equal(m[m[a]], m[a][m]) for a in range(u.size))
        add("associativity", assoc, mode="exhaustive")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(u.size, size=(3, samples))
        add("associativity", np.array_equal(m[m[a, b], c], m[a, m[b, c]]), mode="sampled", samples=samples)
    add("identity", np.array_equal(m[0], ids) and np.array_equal(m[:, 0], ids))
    if u.zero_id is not None:
        z = u.zero_id
        add("zero", bool(np.all(m[z] == z) and np.all(m[:, z] == z)))
    pres = lc_presentation(n)
    rel_ok = all(u.id_of(Word(l, n)) == u.id_of(Word(r, n)) for l, r in pres.relations)
    add("relations", rel_ok, count=len(pres.relations))
    if n >= 4:
        add("enumeration", set(enumerate_canonical(n)) == set(u.elements))
    if n <= 9:
        tc = coset_enumeration(pres)
        add("coset_count", tc.size == u.size, coset=tc.size, universe=u.size)
    for rep in (structure.check_plus_star_laws(u, bruteforce=n <= 6),
                structure.check_singleton_rich(u),
                structure.check_ll_transitive(u),
                structure.check_ll_antisymmetric(u)):
        add(rep.name, rep.passed, counterexample=rep.counterexample)
    if n <= 6:
        for rep in (structure.check_ll_characterization(u), structure.check_sharp_characterization(u)):
            add(rep.name, rep.passed, counterexample=rep.counterexample)
    rep = structure.check_ll_smooth(u)
    add("ll_smooth", rep.passed, counterexample=rep.counterexample, checked=rep.checked)
    bad = []
    for e in structure.idempotents(u):
        f = structure.l_tilde_count_formula(u, e)
        got = (len(structure.l_tilde(u, e)), len(structure.r_tilde(u, e)))
        if f != got:
            bad.append({"e": u.label(e), "formula": list(f), "direct": list(got)})
    add("tilde_counts", not bad, counterexample=bad[0] if bad else None)
    mu = detlab.mobius(u)
    add("mobius", detlab.mobius_interval_check(u, mu))
    _, tmat = detlab.y_substitution(u, mu)
    add("y_unitriangular", detlab.is_unitriangular(tmat))
    rng = np.random.default_rng(seed)
    if n <= 6:
        signs = set()
        ok = True
        for _ in range(5):
            x = rng.integers(1, detlab.CERT_PRIME, size=u.size)
            r = detlab.factorization_check(u, x)
            ok &= r.holds
            signs.add(r.sign)
        add("factorization", ok and len(signs) == 1, sign=sorted(signs))
    if u.zero_id is not None and n <= 6:
        x = rng.integers(-1000, 1000, size=u.size)
        add("contraction", detlab.contraction_check(u, x))
    theta = detlab.theta_nonzero(u, trials=trials, seed=seed)
    expected = detlab.Verdict.NONZERO if n < 8 else detlab.Verdict.ZERO
    add("theta", theta.verdict is expected, verdict=theta.verdict.value)
    return out


def cmd_verify(args) -> tuple[str, int]:
    results = run_verify(args.n, seed=args.seed, trials=args.trials)
    code = EXIT_OK if all(r["passed"] for r in results) else EXIT_FAIL
    if args.format == "json":
        return _dump({"n": args.n, "passed": code == EXIT_OK, "results": results}), code
    width = max(len(r["name"]) for r in results)
    lines = [f"{r['name']:<{width}}  {'PASS' if r['passed'] else 'FAIL'}" for r in results]
    return "\n".join(lines) + "\n", code


def cmd_oracle(args) -> tuple[str, int]:
    pres = lc_presentation(args.n) if args.preset == "lc" else catalan_presentation(args.n)
    try:
        res = congruence_classes(pres, args.max_len, slack=args.slack)
    except MemoryError as exc:
        raise UsageError(f"--max-len {args.max_len}: {exc}") from None
    data = res.to_json()
    if args.format == "json":
        return _dump(data), EXIT_OK
    lines = [f"{data['presentation']}: {data['classes']} classes over {data['words']} words "
             f"(max_len {data['max_len']}, arena {data['arena_len']}, stable {data['stable']})"]
    lines += [f"  {w if w else '1'}" for w in data["representatives"]]
    return "\n".join(lines) + "\n", EXIT_OK


# -- parser -----------------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive, required=True, help="number of generators")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--trials", type=_positive, default=32, help="random evaluations (default 32)")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--output", help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="lcn", description="Layered Catalan monoid toolkit")
    sub = p.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("elements", parents=[common], help="list the element universe").set_defaults(func=cmd_elements)
    c = sub.add_parser("canon", parents=[common], help="canonical form of a word")
    c.add_argument("word", help='dotted word such as "a1.a2", or "1"')
    c.set_defaults(func=cmd_canon)
    m = sub.add_parser("mult", parents=[common], help="product of two words")
    m.add_argument("left")
    m.add_argument("right")
    m.set_defaults(func=cmd_mult)
    cy = sub.add_parser("cayley", parents=[common], help="Cayley table (dot for zero)")
    cy.add_argument("--contracted", action="store_true", help="drop the zero row and column")
    cy.set_defaults(func=cmd_cayley)
    sub.add_parser("idempotents", parents=[common], help="idempotents with L~ and R~").set_defaults(func=cmd_idempotents)
    sub.add_parser("poset", parents=[common], help="<< relation and Moebius function").set_defaults(func=cmd_poset)
    b = sub.add_parser("blocks", parents=[common], help="L~ x R~ blocks of the (S,*) table")
    b.add_argument("--e", help="only the block of this idempotent")
    b.set_defaults(func=cmd_blocks)
    d = sub.add_parser("det", parents=[common], help="decide whether the determinant vanishes")
    d.add_argument("--symbolic-cap", type=_positive, default=detlab.SYMBOLIC_CAP)
    d.add_argument("--report", choices=["text", "json"])
    d.set_defaults(func=cmd_det)
    sub.add_parser("verify", parents=[common], help="run the property suite").set_defaults(func=cmd_verify)
    o = sub.add_parser("oracle", parents=[common], help="brute-force congruence classes")
    o.add_argument("--preset", choices=["lc", "catalan"], default="lc")
    o.add_argument("--max-len", type=int, default=6)
    o.add_argument("--slack", type=int, default=2)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors and --help this way
        return int(exc.code or 0)
    try:
        text, code = args.func(args)
    except UsageError as exc:
        print(f"lcn {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MemoryError, ValueError) as exc:
        print(f"lcn {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
