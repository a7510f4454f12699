"""Command-line interface: ``gpdkit <group> <command> ...``.

Objects go to ``--out`` (or stdout when no ``--out`` is given); a one-line
human summary goes to stdout alongside a written file.  Domain failures exit
with status 1 and a JSON diagnostic on stderr; usage errors exit with 2.
Every flag can also be set through an environment variable ``GF_<FLAG>``
(``GF_CAP_CLOSURE``, ``GF_SEED``, ...); an explicit flag wins.
"""

import argparse
from dataclasses import dataclass
import json
import os
from pathlib import Path
import sys

from . import formats as F
from .certificates import Certificate, canonical_json
from .constructions import (atomic_transformation_model, canonical_shift_action,
                            neumann_pipeline, orbit_indexed_bundle, relation_groupoid, semidirect,
                            theta_from_basis, transformation_groupoid)
from .errors import FormatError, GpdkitError, MissingProvenance
from .groupoid import (global_bisection_basis, icc_check, isotropy, orbit_relation, restrict,
                       validate)
from .groups import DEFAULT_CLOSURE_CAP
from .isocheck import (DEFAULT_ARROW_CAP, DEFAULT_GROUP_ORDER_CAP, bisection_certificate,
                       fiber_distinctness_certificate, genuineness_ingredients,
                       groupoid_isomorphic, is_transformation_groupoid, isomorphism_certificate,
                       recheck)
from .neumann import (GeneratorWord, OddSeqPrefix, Point, alpha_order_truncated, distinguish,
                      invariant_report, word_apply)
from .suite import SuiteBounds, generate_suite

COMMANDS = {
    "neumann": ("eval", "invariant", "distinguish", "order"),
    "groupoid": ("validate", "isotropy", "components", "bisections", "icc"),
    "construct": ("transformation", "relation", "semidirect", "orbit-bundle", "shift-action",
                  "atomic-model"),
    "iso": ("check", "transmodel"),
    "certify": ("fibers", "genuine"),
}


FLAGS = ("--cap-closure N", "--cap-arrows N", "--cap-group-order N", "--depth M", "--seed S",
         "--out PATH", "--recheck")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CommandConfig:
    command: tuple
    inputs: tuple
    out: str = None
    cap_closure: int = DEFAULT_CLOSURE_CAP
    cap_arrows: int = DEFAULT_ARROW_CAP
    cap_group_order: int = DEFAULT_GROUP_ORDER_CAP
    depth: int = None
    seed: int = 0
    recheck: bool = False
    roles: tuple = ()

    def __post_init__(self):
        for name in ("cap_closure", "cap_arrows", "cap_group_order"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.depth is not None and self.depth < 1:
            raise UsageError("--depth must be >= 1")


def _env_int(name, default):
    raw = os.environ.get("GF_" + name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GF_{name}={raw!r} is not an integer") from None


def _common(p):
    p.add_argument("--cap-closure", type=int, default=None, metavar="N")
    p.add_argument("--cap-arrows", type=int, default=None, metavar="N")
    p.add_argument("--cap-group-order", type=int, default=None, metavar="N")
    p.add_argument("--depth", type=int, default=None, metavar="M")
    p.add_argument("--seed", type=int, default=None, metavar="S")
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--recheck", action="store_true", default=None,
                   help="recheck emitted certificates before exiting")


def build_parser():
    parser = argparse.ArgumentParser(prog="gpdkit", description="Finite groupoid toolkit.")
    top = parser.add_subparsers(dest="group", required=True)
    for group, subs in COMMANDS.items():
        gp = top.add_parser(group)
        sp = gp.add_subparsers(dest="command", required=True)
        for name in subs:
            c = sp.add_parser(name)
            c.add_argument("inputs", nargs="*")
            _common(c)
    r = top.add_parser("recheck", help="re-validate a certificate")
    r.add_argument("inputs", nargs=1, metavar="CERTIFICATE")
    r.add_argument("--input", action="append", default=[], metavar="ROLE=PATH",
                   help="input object referenced by the certificate")
    _common(r)
    s = top.add_parser("suite", help="write a seeded groupoid suite to --out DIR")
    s.add_argument("inputs", nargs="*")
    s.add_argument("--max-units", type=int, default=3)
    _common(s)
    return parser


def _config(ns):
    def pick(flag, env, default):
        v = getattr(ns, flag)
        return v if v is not None else _env_int(env, default)

    command = (ns.group,) if ns.group in ("recheck", "suite") else (ns.group, ns.command)
    depth = ns.depth if ns.depth is not None else _env_int("DEPTH", None)
    out = ns.out if ns.out is not None else os.environ.get("GF_OUT")
    rc = ns.recheck if ns.recheck is not None else os.environ.get("GF_RECHECK", "") not in ("", "0")
    return CommandConfig(
        command=command,
        inputs=tuple(ns.inputs),
        out=out,
        cap_closure=pick("cap_closure", "CAP_CLOSURE", DEFAULT_CLOSURE_CAP),
        cap_arrows=pick("cap_arrows", "CAP_ARROWS", DEFAULT_ARROW_CAP),
        cap_group_order=pick("cap_group_order", "CAP_GROUP_ORDER", DEFAULT_GROUP_ORDER_CAP),
        depth=depth,
        seed=pick("seed", "SEED", 0),
        recheck=rc,
        roles=tuple(getattr(ns, "input", ()) or ()),
    )


class _Result:
    def __init__(self, text, summary, status=0, certificate=None, objects=None):
        self.text = text
        self.summary = summary
        self.status = status
        self.certificate = certificate
        self.objects = objects or {}


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def _need(cfg, n, names):
    if len(cfg.inputs) != n:
        raise UsageError(f"{' '.join(cfg.command)} expects {n} argument(s): {names}")
    return cfg.inputs


def _groupoid(path):
    return F.load_groupoid(_read(path))


def _cert(cert, summary, objects=None):
    return _Result(cert.to_text(), summary, certificate=cert, objects=objects)


def _neumann(cfg, cmd):
    if cmd == "eval":
        prefix, word, point = _need(cfg, 3, "PREFIX WORD POINT")
        p = word_apply(OddSeqPrefix.parse(prefix), GeneratorWord(word), Point.parse(point))
        return _Result(f"{p}\n", f"{word} sends {point} to {p}")
    if cmd == "order":
        (prefix,) = _need(cfg, 1, "PREFIX")
        U = OddSeqPrefix.parse(prefix)
        m = cfg.depth or len(U)
        return _Result(f"{alpha_order_truncated(U, m)}\n", f"alpha order at depth {m}")
    if cmd == "invariant":
        (prefix,) = _need(cfg, 1, "PREFIX")
        U = OddSeqPrefix.parse(prefix)
        rep = invariant_report(U, cfg.depth, cfg.cap_closure)
        obj = {"prefix": str(U),
               "blocks": [{"block": b.block, "degree": b.degree, "order": b.order, "status": b.status}
                          for b in rep],
               "invariant": [b.degree for b in rep]}
        return _Result(canonical_json(obj), f"alternating invariant {obj['invariant']}")
    U, V = (OddSeqPrefix.parse(t) for t in _need(cfg, 2, "U V"))
    cert = distinguish(U, V)
    return _cert(cert, f"verdict {cert.witnesses['verdict']}")


def _groupoid_cmd(cfg, cmd):
    (path,) = _need(cfg, 1, "GROUPOID")
    G = _groupoid(path)
    if cmd == "validate":
        rep = validate(G)
        return _Result(canonical_json(rep.to_json()), f"{len(rep.violations)} violation(s)",
                       0 if rep.ok else 1)
    if cmd == "isotropy":
        iso = isotropy(G)
        obj = {x: {"order": iso.order(x), "arrows": list(iso.fibers[x])} for x in G.units}
        return _Result(canonical_json(obj), f"isotropy orders {[iso.order(x) for x in G.units]}")
    if cmd == "components":
        classes = orbit_relation(G).classes()
        files = {}
        if cfg.out:
            for i, c in enumerate(classes):
                files[f"component-{i}.gpd"] = F.dump_groupoid(restrict(G, c))
        obj = {"components": [list(c) for c in classes]}
        return _Result(canonical_json(obj), f"{len(classes)} component(s)", objects={"files": files})
    if cmd == "bisections":
        cert = bisection_certificate(G, global_bisection_basis(G))
        return _cert(cert, f"{cert.witnesses['count']} global bisections", {"groupoid": G})
    v = icc_check(G)
    obj = {"icc": v.icc, "witness": v.witness}
    return _Result(canonical_json(obj), "icc" if v.icc else f"not icc, witness arrow {v.witness}")


def _construct(cfg, cmd):
    if cmd == "transformation":
        (path,) = _need(cfg, 1, "ACTION")
        A = F.load_action(_read(path), Path(path).parent)
        G = transformation_groupoid(A)
    elif cmd == "relation":
        (path,) = _need(cfg, 1, "RELATION")
        G = relation_groupoid(F.load_relation(_read(path)))
    elif cmd == "semidirect":
        (path,) = _need(cfg, 1, "BUNDLE_ACTION")
        G = semidirect(F.load_bundle_action(_read(path)))
    elif cmd in ("orbit-bundle", "shift-action"):
        rpath, bpath = _need(cfg, 2, "RELATION BASE_BUNDLE")
        R = F.load_relation(_read(rpath))
        base = F.load_bundle(_read(bpath))
        theta = theta_from_basis(R)
        H = orbit_indexed_bundle(R, base, theta)
        if cmd == "orbit-bundle":
            return _Result(F.dump_bundle(H), f"orbit-indexed bundle over {len(R.units)} units")
        D = canonical_shift_action(R, H, theta)
        return _Result(F.dump_bundle_action(D), f"shift action on {len(R.pairs)} pairs")
    else:
        (path,) = _need(cfg, 1, "GROUPOID")
        M = atomic_transformation_model(_groupoid(path))
        return _Result(F.dump_action(M.action), f"action of a group of order {M.action.group.order()}")
    return _Result(F.dump_groupoid(G), f"groupoid with {G.n_units} units, {G.n_arrows} arrows")


def _iso(cfg, cmd):
    if cmd == "check":
        a, b = _need(cfg, 2, "A B")
        A, B = _groupoid(a), _groupoid(b)
        f = groupoid_isomorphic(A, B, cfg.cap_arrows)
        cert = isomorphism_certificate(A, B, f)
        return _cert(cert, "isomorphic" if f is not None else "not isomorphic", {"A": A, "B": B})
    (path,) = _need(cfg, 1, "GROUPOID")
    G = _groupoid(path)
    v = is_transformation_groupoid(G, cfg.cap_group_order, cfg.cap_arrows)
    if not v:
        return _Result(canonical_json(v.summary()), f"no model: {v.verdict}", 1)
    obj = {"action": F.action_to_json(v.action), "model": F.groupoid_to_json(v.model),
           "isomorphism": list(v.phi), "verdict": v.summary()}
    return _Result(canonical_json(obj), f"model found ({v.detail})")


def _certify(cfg, cmd):
    if cmd == "fibers":
        (path,) = _need(cfg, 1, "BUNDLE")
        B = F.load_bundle(_read(path))
        cert = fiber_distinctness_certificate(B, cfg.cap_closure)
        return _cert(cert, "all fibers distinct" if cert.witnesses["all_distinct"]
                     else "some pairs indistinguishable", {"bundle": B})
    gpath, bpath = _need(cfg, 2, "GROUPOID BASE_BUNDLE")
    G = _groupoid(gpath)
    base = F.load_bundle(_read(bpath))
    pipe = neumann_pipeline(orbit_relation(G), base)
    if F.dump_groupoid(pipe.groupoid) != F.dump_groupoid(G):
        raise MissingProvenance("groupoid is not the orbit-indexed semidirect product of this base bundle")
    cert = genuineness_ingredients(G, pipe)
    return _cert(cert, cert.witnesses["status"], {"groupoid": G, "base": base})


_LOADERS = {"A": F.load_groupoid, "B": F.load_groupoid, "groupoid": F.load_groupoid,
            "bundle": F.load_bundle, "base": F.load_bundle}


def _recheck(cfg):
    cert = Certificate.from_text(_read(cfg.inputs[0]))
    objects = {}
    for spec in cfg.roles:
        role, sep, path = spec.partition("=")
        if not sep or role not in _LOADERS:
            raise UsageError(f"--input expects ROLE=PATH with ROLE in {sorted(_LOADERS)}")
        objects[role] = _LOADERS[role](_read(path))
    res = recheck(cert, objects)
    obj = {"ok": res.ok, "reason": res.reason, "kind": cert.kind}
    return _Result(canonical_json(obj), f"recheck {'passed' if res.ok else 'FAILED'}: {res.reason}",
                   0 if res.ok else 1)


def _suite(cfg, max_units):
    if not cfg.out:
        raise UsageError("suite needs --out DIR")
    members = generate_suite(cfg.seed, SuiteBounds(max_units=max_units))
    files = {f"{name}.gpd": F.dump_groupoid(G) for name, G in members}
    index = canonical_json({"seed": cfg.seed, "files": sorted(files)})
    return _Result(index, f"{len(files)} groupoids", objects={"files": files, "dir": True})


def execute(cfg, ns=None):
    group = cfg.command[0]
    if group == "recheck":
        return _recheck(cfg)
    if group == "suite":
        return _suite(cfg, getattr(ns, "max_units", 3))
    handler = {"neumann": _neumann, "groupoid": _groupoid_cmd, "construct": _construct,
               "iso": _iso, "certify": _certify}[group]
    return handler(cfg, cfg.command[1])


def _emit(cfg, res, stdout):
    files = res.objects.get("files")
    if files is not None and cfg.out and (res.objects.get("dir") or files):
        d = Path(cfg.out)
        d.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (d / name).write_text(text)
        (d / "index.json").write_text(res.text)
        print(res.summary, file=stdout)
    elif cfg.out:
        Path(cfg.out).write_text(res.text)
        print(res.summary, file=stdout)
    else:
        stdout.write(res.text)


def run(argv=None, stdout=None, stderr=None):
    """Entry point; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(ns)
        res = execute(cfg, ns)
        if cfg.recheck and res.certificate is not None:
            again = recheck(Certificate.from_text(res.text), res.objects)
            if not again:
                raise GpdkitError(f"emitted certificate failed recheck: {again.reason}")
        _emit(cfg, res, stdout)
        if res.status:
            stderr.write(json.dumps({"error": "DomainFailure", "command": list(cfg.command),
                                     "message": res.summary}, sort_keys=True) + "\n")
        return res.status
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(json.dumps({"error": "UsageError", "message": str(exc), "valid_flags": FLAGS},
                                sort_keys=True) + "\n")
        return 2
    except GpdkitError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "witness", None) is not None:
            diag["witness"] = exc.witness
        stderr.write(json.dumps(diag, sort_keys=True, default=str) + "\n")
        return 1


def main():
    sys.exit(run())
