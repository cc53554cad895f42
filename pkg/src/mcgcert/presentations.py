"""Finite presentations read from ``.pres`` files.

A file lists generators and relations directly; ``from CTX`` pulls in the
instances of a theorem over a catalog as well.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import dsl
from .catalog import resolve
from .schemas import RelationInstance, SchemaId, generators_of, store_for
from .words import McgError, Word


@dataclass
class Presentation:
    name: str
    generators: list
    relations: list

    def render(self) -> str:
        lines = [f"presentation {self.name}"]
        lines += [f"gen {s.render()}" for s in self.generators]
        for r in self.relations:
            tag = f" [{r.schema.name}, {r.provenance}]" if r.schema else ""
            lines.append(f"rel {r.id} : {r.lhs} = {r.rhs}{tag}")
        return "\n".join(lines) + "\n"


def _schema(label):
    if label is None:
        return None
    try:
        return SchemaId[label]
    except KeyError:
        raise McgError(f"unknown schema {label}") from None


def presentation_from_document(doc: dsl.Document) -> Presentation:
    relations = []
    for st in doc.of("from"):
        relations += list(store_for(st["context"], include_derived=False)[1].values())
    for st in doc.of("rel"):
        relations.append(RelationInstance(st["id"], _schema(st["schema"]), Word(st["lhs"]),
                                          Word(st["rhs"]), (), st["provenance"] or ""))
    gens = [st["symbol"] for st in doc.of("gen")]
    if not gens:
        gens = generators_of(relations)
    return Presentation(doc.first("presentation")["name"], gens, relations)


def parse_presentation(text: str, path: str | None = None) -> Presentation:
    return presentation_from_document(dsl.parse(text, dsl.DocKind.PRESENTATION, path))


def load_presentation(name_or_path) -> Presentation:
    p = resolve(str(name_or_path), "presentations", "pres")
    return parse_presentation(p.read_text(), str(p))
