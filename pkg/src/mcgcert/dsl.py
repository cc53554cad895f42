"""Line-oriented documents: catalogs, presentations, derivations, morphisms.

Every statement keeps its 1-based line number; rendering a parsed
document gives back the canonical text, so bundled files round-trip.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .words import McgError, WordSyntaxError, parse_letters, parse_symbol, render_letters


class ParseError(McgError):
    def __init__(self, line: int, col: int, expected: str, path: str | None = None):
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{col}: expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


class DocKind(enum.Enum):
    CATALOG = "cat"
    PRESENTATION = "pres"
    DERIVATION = "deriv"
    MORPHISM = "morph"


@dataclass
class Statement:
    keyword: str
    fields: dict = field(default_factory=dict)
    line: int = 0
    comment: str | None = None

    def __getitem__(self, key):
        return self.fields[key]

    def get(self, key, default=None):
        return self.fields.get(key, default)


@dataclass
class Document:
    kind: DocKind
    statements: list
    path: str | None = None

    def of(self, keyword: str) -> list:
        return [s for s in self.statements if s.keyword == keyword]

    def first(self, keyword: str):
        found = self.of(keyword)
        return found[0] if found else None


# -- low-level scanning --------------------------------------------------------

NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_name_re = re.compile(NAME)
_token_re = re.compile(r"\S+")
_orient_re = re.compile(rf"({NAME})([+-])$")


class _Line:
    """The statement body of one line, with its column offset."""

    def __init__(self, text: str, lineno: int, offset: int):
        self.text = text
        self.lineno = lineno
        self.offset = offset

    def fail(self, pos: int, expected: str):
        raise ParseError(self.lineno, self.offset + pos + 1, expected)

    def tokens(self):
        return [(m.group(0), m.start()) for m in _token_re.finditer(self.text)]

    def word(self, start: int, end: int | None = None):
        chunk = self.text[start:end]
        try:
            return parse_letters(chunk, start)
        except WordSyntaxError as exc:
            self.fail(exc.col, exc.expected)

    def symbol(self, tok: str, pos: int):
        try:
            return parse_symbol(tok, pos)
        except WordSyntaxError as exc:
            self.fail(pos, exc.expected)

    def find(self, sep: str, start: int = 0, what: str | None = None) -> int:
        i = self.text.find(sep, start)
        if i < 0:
            self.fail(len(self.text), what or f"'{sep.strip()}'")
        return i


def _name(line: _Line, tok: str, pos: int, what: str = "identifier") -> str:
    if not _name_re.fullmatch(tok):
        line.fail(pos, what)
    return tok


def _orient(line: _Line, tok: str, pos: int) -> tuple:
    m = _orient_re.fullmatch(tok)
    if not m:
        line.fail(pos, "oriented curve like alpha+")
    return (m.group(1), m.group(2))


def _curve(line: _Line, tok: str, pos: int) -> tuple:
    rev = tok.endswith("^-1")
    _name(line, tok[:-3] if rev else tok, pos, "curve name")
    return (tok[:-3] if rev else tok, rev)


def _int(line: _Line, tok: str, pos: int, what: str) -> int:
    if not re.fullmatch(r"\d+", tok):
        line.fail(pos, what)
    return int(tok)


def _keyvals(line: _Line, start: int, required: tuple, optional: tuple = ()) -> dict:
    """Parse ``key=value`` tokens; reports the column of a missing value."""
    out = {}
    for tok, pos in line.tokens():
        if pos < start:
            continue
        key, eq, value = tok.partition("=")
        if not eq or key not in required + optional:
            line.fail(pos, "one of " + ", ".join(k + "=" for k in required + optional))
        if not value:
            line.fail(pos + len(key) + 1, f"value for {key}=")
        if key in out:
            line.fail(pos, f"{key}= only once")
        out[key] = (value, pos + len(key) + 1)
    for key in required:
        if key not in out:
            line.fail(len(line.text), f"{key}=")
    return out


def _fmt_orient(tok) -> str:
    return tok[0] + tok[1]


def _fmt_curve(c) -> str:
    return c[0] + ("^-1" if c[1] else "")


# -- statement grammars ----------------------------------------------------------

def _split_source(line: _Line) -> tuple:
    i = line.text.find("; source:")
    if i < 0:
        return line, None
    src = line.text[i + len("; source:"):].strip()
    if not src:
        line.fail(i + len("; source:"), "source text")
    return _Line(line.text[:i].rstrip(), line.lineno, line.offset), src


def _p_catalog(line, kw_end):
    toks = line.tokens()
    if len(toks) != 2:
        line.fail(kw_end, "catalog name")
    return {"name": _name(line, *toks[1])}


_surface_re = re.compile(r"\s*N\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def _p_surface(line, kw_end):
    m = _surface_re.match(line.text, kw_end)
    if not m:
        line.fail(kw_end + 1, "N(g,n)")
    return {"genus": int(m.group(1)), "boundary": int(m.group(2))}


def _p_curve(line, kw_end):
    toks = line.tokens()
    if len(toks) < 3 or toks[1][0] not in ("one", "two"):
        line.fail(kw_end + 1, "'one' or 'two' followed by curve names")
    return {"sided": toks[1][0], "names": [_name(line, *t) for t in toks[2:]]}


def _p_pair(line, kw_end):
    toks = line.tokens()
    if len(toks) != 3:
        line.fail(kw_end + 1, "one-sided curve and two-sided curve")
    return {"mu": _name(line, *toks[1]), "alpha": _name(line, *toks[2])}


def _p_bound(line, kw_end):
    toks = line.tokens()
    if len(toks) != 3 or toks[2][0] not in ("disk", "mobius"):
        line.fail(toks[2][1] if len(toks) > 2 else len(line.text), "curve followed by disk|mobius")
    return {"curve": _name(line, *toks[1]), "bounds": toks[2][0]}


def _p_intersect(line, kw_end):
    toks = line.tokens()
    if len(toks) != 4:
        line.fail(len(line.text), "two curves and an intersection number")
    return {"a": _name(line, *toks[1]), "b": _name(line, *toks[2]),
            "number": _int(line, *toks[3], "intersection number")}


def _p_compatible(line, kw_end):
    toks = line.tokens()
    if len(toks) != 3:
        line.fail(len(line.text), "two oriented curves")
    return {"a": _orient(line, *toks[1]), "b": _orient(line, *toks[2])}


def _named_colon(line, kw_end):
    toks = line.tokens()
    if len(toks) < 3 or toks[2][0] != ":":
        line.fail(toks[1][1] + len(toks[1][0]) if len(toks) > 1 else kw_end, "name followed by ':'")
    return _name(line, *toks[1]), toks[3:]


def _p_chain(line, kw_end):
    name, rest = _named_colon(line, kw_end)
    arrow = [i for i, (t, _) in enumerate(rest) if t == "->"]
    if len(arrow) != 1:
        line.fail(len(line.text), "'->' between chain and boundary curves")
    k = arrow[0]
    chain = [_orient(line, *t) for t in rest[:k]]
    boundary = [_orient(line, *t) for t in rest[k + 1:]]
    if not chain or not boundary:
        line.fail(len(line.text), "non-empty chain and boundary")
    return {"name": name, "chain": chain, "boundary": boundary}


def _p_lantern(line, kw_end):
    name, rest = _named_colon(line, kw_end)
    if len(rest) != 8 or rest[3][0] != "=":
        line.fail(rest[0][1] if rest else len(line.text), "three oriented curves '=' four oriented curves")
    toks = rest[:3] + rest[4:]
    return {"name": name, "curves": [_orient(line, *t) for t in toks]}


def _p_delta(line, kw_end):
    toks = line.tokens()
    if len(toks) != 5 or toks[3][0] != "->":
        line.fail(len(line.text), "mu alpha -> oriented curve")
    return {"mu": _name(line, *toks[1]), "alpha": _curve(line, *toks[2]),
            "delta": _orient(line, *toks[4])}


_transport_re = re.compile(r"\[\s*([+-])\s*:\s*([+-])\s*(?:,\s*([+-])\s*:\s*([+-])\s*)?\]\s*$")


def _p_action(line, kw_end):
    toks = line.tokens()
    if len(toks) < 3 or toks[2][0] != ":":
        line.fail(kw_end + 1, "name followed by ':'")
    name = _name(line, *toks[1])
    start = toks[2][1] + 1
    m_at = line.find(" maps ", start, "'maps'")
    actor = line.word(start, m_at)
    rest = _Line(line.text[m_at + 6:], line.lineno, line.offset + m_at + 6)
    transport = []
    br = rest.text.find("[")
    if br >= 0:
        m = _transport_re.match(rest.text, br)
        if not m:
            rest.fail(br, "transport like [+:-, -:+]")
        pairs = [(m.group(1), m.group(2))]
        if m.group(3):
            pairs.append((m.group(3), m.group(4)))
        transport = pairs
        rest = _Line(rest.text[:br].rstrip(), rest.lineno, rest.offset)
    rtoks = rest.tokens()
    if len(rtoks) != 3 or rtoks[1][0] != "->":
        rest.fail(0, "curve -> curve")
    return {"name": name, "actor": actor, "curve": _curve(rest, *rtoks[0]),
            "image": _curve(rest, *rtoks[2]), "transport": transport}


def _p_text(line, kw_end):
    text = line.text[kw_end:].strip()
    if not text:
        line.fail(kw_end, "text")
    return {"text": text}


def _p_derive(line, kw_end):
    toks = line.tokens()
    if len(toks) < 3 or toks[2][0] != ":":
        line.fail(kw_end + 1, "name followed by ':'")
    name = _name(line, *toks[1])
    start = toks[2][1] + 1
    arrow = line.find("=>", start, "'=>'")
    in_at = line.find(" in ", arrow, "'in <context>'")
    ctx = line.text[in_at + 4:].strip()
    if not re.fullmatch(rf"(?:{NAME}@)?[A-Za-z0-9_.\-]+", ctx):
        line.fail(in_at + 4, "context like figure4 or Thm2@figure4")
    return {"name": name, "source": line.word(start, arrow),
            "target": line.word(arrow + 2, in_at), "context": ctx}


def _p_apply(line, kw_end):
    kv = _keyvals(line, kw_end, ("rel", "dir", "at"))
    if kv["dir"][0] not in ("fwd", "rev"):
        line.fail(kv["dir"][1], "fwd or rev")
    return {"rel": kv["rel"][0], "dir": kv["dir"][0], "at": _int(line, *kv["at"], "position")}


def _p_insert(line, kw_end):
    toks = line.tokens()
    if len(toks) < 3 or not toks[-1][0].startswith("at="):
        line.fail(len(line.text), "word followed by at=<position>")
    tok, pos = toks[-1]
    if tok == "at=":
        line.fail(pos + 3, "value for at=")
    return {"word": line.word(kw_end, pos), "at": _int(line, tok[3:], pos + 3, "position")}


def _p_regroup(line, kw_end):
    rest = line.text[kw_end:].strip()
    if not rest:
        return {"to": None}
    i = line.text.find("to", kw_end)
    if not line.text[kw_end:].lstrip().startswith("to "):
        line.fail(kw_end + 1, "'to <word>' or end of line")
    return {"to": line.word(i + 2)}


def _p_morphism(line, kw_end):
    m = re.match(rf"\s*({NAME})\s*:\s*(\S+)\s*->\s*(\S+)\s*$", line.text[kw_end:])
    if not m:
        line.fail(kw_end + 1, "name : <source context> -> <target context>")
    return {"name": m.group(1), "source": m.group(2), "target": m.group(3)}


def _p_fix(line, kw_end):
    toks = line.tokens()
    if len(toks) != 2:
        line.fail(kw_end + 1, "generator kind T|Y|U or a generator symbol")
    tok, pos = toks[1]
    if tok in ("T", "Y", "U"):
        return {"kind": tok, "symbol": None}
    return {"kind": None, "symbol": line.symbol(tok, pos)}


def _p_map(line, kw_end):
    arrow = line.find("=>", kw_end, "'=>'")
    sym_text = line.text[kw_end:arrow].strip()
    return {"symbol": line.symbol(sym_text, kw_end + 1), "image": line.word(arrow + 2)}


def _p_rule(line, kw_end):
    toks = line.tokens()
    if len(toks) != 2:
        line.fail(kw_end + 1, "schema label")
    return {"schema": _name(line, *toks[1], "schema label")}


def _evidence(line, kw_end, key, search=False):
    if search:
        kv = _keyvals(line, kw_end, (key, "steps", "len", "states"))
        return {key: kv[key][0], "cert": None,
                "bounds": tuple(_int(line, *kv[k], f"{k} bound") for k in ("steps", "len", "states"))}
    kv = _keyvals(line, kw_end, (key, "cert"))
    return {key: kv[key][0], "cert": kv["cert"][0], "bounds": None}


def _keyvals_search(line, kw_end, key):
    # "search" is a bare flag; strip it before key=value parsing
    i = line.text.find(" search", kw_end)
    text = line.text[:i] + " " * 7 + line.text[i + 7:]
    return _evidence(_Line(text, line.lineno, line.offset), kw_end, key, search=True)


def _p_evidence(line, kw_end):
    if " search" in line.text:
        return _keyvals_search(line, kw_end, "rel")
    return _evidence(line, kw_end, "rel")


def _p_roundtrip(line, kw_end):
    out = _keyvals_search(line, kw_end, "gen") if " search" in line.text else _evidence(line, kw_end, "gen")
    if out["gen"] != "*":
        out["gen"] = line.symbol(out["gen"], line.text.find("gen=") + 4)
    return out


def _p_inverse(line, kw_end):
    toks = line.tokens()
    if len(toks) not in (2, 3):
        line.fail(kw_end + 1, "morphism file")
    if len(toks) == 3 and toks[2][0] != "both":
        line.fail(toks[2][1], "'both' or end of line")
    return {"file": toks[1][0], "both": len(toks) == 3}


def _p_presentation(line, kw_end):
    return _p_catalog(line, kw_end)


def _p_from(line, kw_end):
    toks = line.tokens()
    if len(toks) != 2:
        line.fail(kw_end + 1, "context like Thm2@figure4")
    return {"context": toks[1][0]}


def _p_gen(line, kw_end):
    toks = line.tokens()
    if len(toks) != 2:
        line.fail(kw_end + 1, "generator symbol")
    return {"symbol": line.symbol(*toks[1])}


def _p_rel(line, kw_end):
    toks = line.tokens()
    if len(toks) < 3 or toks[2][0] != ":":
        line.fail(kw_end + 1, "relation id followed by ':'")
    rid = toks[1][0]
    start = toks[2][1] + 1
    end = len(line.text)
    schema = provenance = None
    br = line.text.find("[", start)
    if br >= 0:
        close = line.text.rfind("]")
        if close < br or line.text[close + 1:].strip():
            line.fail(br, "'[schema, provenance]' at end of line")
        inner = line.text[br + 1:close]
        schema, _, provenance = inner.partition(",")
        schema = schema.strip()
        provenance = provenance.strip() or None
        end = br
    eq = line.find("=", start, "'='")
    return {"id": rid, "lhs": line.word(start, eq), "rhs": line.word(eq + 1, end),
            "schema": schema, "provenance": provenance}


# -- renderers ------------------------------------------------------------------

def _src(f):
    return f" ; source: {f['source']}" if f.get("source") else ""


def _r_evidence(f, key):
    val = f[key] if isinstance(f[key], str) else f[key].render()
    if f["cert"] is not None:
        return f"{key}={val} cert={f['cert']}"
    s, n, k = f["bounds"]
    return f"{key}={val} search steps={s} len={n} states={k}"


_RENDER = {
    "catalog": lambda f: f"catalog {f['name']}",
    "presentation": lambda f: f"presentation {f['name']}",
    "surface": lambda f: f"surface N({f['genus']},{f['boundary']})",
    "curve": lambda f: f"curve {f['sided']} " + " ".join(f["names"]),
    "pair": lambda f: f"pair {f['mu']} {f['alpha']}",
    "basepair": lambda f: f"basepair {f['mu']} {f['alpha']}",
    "bound": lambda f: f"bound {f['curve']} {f['bounds']}" + _src(f),
    "intersect": lambda f: f"intersect {f['a']} {f['b']} {f['number']}" + _src(f),
    "compatible": lambda f: f"compatible {_fmt_orient(f['a'])} {_fmt_orient(f['b'])}" + _src(f),
    "chain": lambda f: f"chain {f['name']} : " + " ".join(map(_fmt_orient, f["chain"]))
    + " -> " + " ".join(map(_fmt_orient, f["boundary"])) + _src(f),
    "lantern": lambda f: f"lantern {f['name']} : " + " ".join(map(_fmt_orient, f["curves"][:3]))
    + " = " + " ".join(map(_fmt_orient, f["curves"][3:])) + _src(f),
    "delta": lambda f: f"delta {f['mu']} {_fmt_curve(f['alpha'])} -> {_fmt_orient(f['delta'])}" + _src(f),
    "action": lambda f: f"action {f['name']} : {render_letters(f['actor'])} maps "
    + f"{_fmt_curve(f['curve'])} -> {_fmt_curve(f['image'])}"
    + (" [" + ", ".join(f"{a}:{b}" for a, b in f["transport"]) + "]" if f["transport"] else "")
    + _src(f),
    "derive": lambda f: f"derive {f['name']} : {render_letters(f['source'])} => "
    + f"{render_letters(f['target'])} in {f['context']}",
    "cite": lambda f: f"cite {f['text']}",
    "note": lambda f: f"note {f['text']}",
    "apply": lambda f: f"apply rel={f['rel']} dir={f['dir']} at={f['at']}",
    "insert": lambda f: f"insert {render_letters(f['word'])} at={f['at']}",
    "regroup": lambda f: "regroup" + (f" to {render_letters(f['to'])}" if f["to"] is not None else ""),
    "morphism": lambda f: f"morphism {f['name']} : {f['source']} -> {f['target']}",
    "fix": lambda f: f"fix {f['kind'] or f['symbol'].render()}",
    "map": lambda f: f"map {f['symbol'].render()} => {render_letters(f['image'])}",
    "rule": lambda f: f"rule {f['schema']}",
    "evidence": lambda f: "evidence " + _r_evidence(f, "rel"),
    "roundtrip": lambda f: "roundtrip " + _r_evidence(f, "gen"),
    "inverse": lambda f: f"inverse {f['file']}" + (" both" if f.get("both") else ""),
    "from": lambda f: f"from {f['context']}",
    "gen": lambda f: f"gen {f['symbol'].render()}",
    "rel": lambda f: f"rel {f['id']} : {render_letters(f['lhs'])} = {render_letters(f['rhs'])}"
    + (f" [{f['schema']}" + (f", {f['provenance']}" if f["provenance"] else "") + "]" if f["schema"] else ""),
}

_FACTS = {"bound", "intersect", "compatible", "chain", "lantern", "delta", "action"}

_GRAMMAR = {
    DocKind.CATALOG: {
        "catalog": _p_catalog, "surface": _p_surface, "curve": _p_curve, "pair": _p_pair,
        "basepair": _p_pair, "bound": _p_bound, "intersect": _p_intersect,
        "compatible": _p_compatible, "chain": _p_chain, "lantern": _p_lantern,
        "delta": _p_delta, "action": _p_action,
    },
    DocKind.DERIVATION: {
        "derive": _p_derive, "cite": _p_text, "apply": _p_apply, "insert": _p_insert,
        "regroup": _p_regroup,
    },
    DocKind.MORPHISM: {
        "morphism": _p_morphism, "fix": _p_fix, "map": _p_map, "rule": _p_rule,
        "evidence": _p_evidence, "roundtrip": _p_roundtrip, "inverse": _p_inverse, "note": _p_text,
    },
    DocKind.PRESENTATION: {
        "presentation": _p_presentation, "from": _p_from, "gen": _p_gen, "rel": _p_rel,
    },
}

_HEADER = {
    DocKind.CATALOG: "catalog", DocKind.DERIVATION: "derive",
    DocKind.MORPHISM: "morphism", DocKind.PRESENTATION: "presentation",
}


def parse(text: str, kind: DocKind, path: str | None = None) -> Document:
    grammar = _GRAMMAR[kind]
    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body, hash_, comment = raw.partition("#")
        if not body.strip():
            if hash_:
                statements.append(Statement("#", {}, lineno, comment))
            else:
                statements.append(Statement("", {}, lineno))
            continue
        indent = len(body) - len(body.lstrip())
        line = _Line(body.rstrip()[indent:], lineno, indent)
        keyword = line.text.split()[0]
        if keyword not in grammar:
            try:
                line.fail(0, "one of " + ", ".join(sorted(grammar)))
            except ParseError as exc:
                raise ParseError(exc.line, exc.col, exc.expected, path) from None
        try:
            source = None
            if keyword in _FACTS:
                line, source = _split_source(line)
            fields = grammar[keyword](line, len(keyword))
        except ParseError as exc:
            raise ParseError(exc.line, exc.col, exc.expected, path) from None
        if source is not None:
            fields["source"] = source
        statements.append(Statement(keyword, fields, lineno, comment if hash_ else None))
    headers = [s for s in statements if s.keyword == _HEADER[kind]]
    if len(headers) != 1:
        raise ParseError(headers[1].line if len(headers) > 1 else 1, 1,
                         f"exactly one '{_HEADER[kind]}' header", path)
    return Document(kind, statements, path)


def render_statement(stmt: Statement) -> str:
    if stmt.keyword == "":
        return ""
    if stmt.keyword == "#":
        return "#" + stmt.comment
    text = _RENDER[stmt.keyword](stmt.fields)
    if stmt.comment is not None:
        text += "  #" + stmt.comment
    return text


def render(doc: Document) -> str:
    return "".join(render_statement(s) + "\n" for s in doc.statements)


def kind_for_path(path: str) -> DocKind:
    ext = path.rsplit(".", 1)[-1]
    try:
        return DocKind(ext)
    except ValueError:
        raise McgError(f"unknown document extension .{ext}") from None
