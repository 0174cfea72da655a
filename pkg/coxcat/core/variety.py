"""Turn a validated input document into the objects every command starts from"""

import logging
from dataclasses import dataclass

from coxcat.core.config import InputDocument
from coxcat.core.errors import SchemaError
from coxcat.toric.divisor import ClassGroup
from coxcat.toric.fan import StackyFan, validate_fan

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Variety:
    name: str
    class_group: ClassGroup
    stacky: StackyFan | None = None


def variety_from_document(doc: InputDocument) -> Variety:
    """Fan mode keeps the fan; cox mode derives the pairing from the degrees"""
    if doc.mode == "fan":
        fan = validate_fan(doc.rank, doc.rays, doc.cones)
        stacky = StackyFan(fan, tuple(doc.multipliers)) if doc.multipliers else StackyFan.of(fan)
        cg = ClassGroup.from_pairing(stacky.beta, doc.degrees or None)
        logger.info(f"Read fan {doc.name or '<unnamed>'}: {len(fan.rays)} rays, {len(fan.cones)} cones")
        return Variety(doc.name, cg, stacky)

    if doc.rays:
        if doc.rank is None:
            raise SchemaError("cox mode with explicit rays needs 'rank'")
        fan = validate_fan(doc.rank, doc.rays, doc.cones)
        stacky = StackyFan(fan, tuple(doc.multipliers)) if doc.multipliers else StackyFan.of(fan)
        cg = ClassGroup.from_pairing(stacky.beta, doc.degrees)
        return Variety(doc.name, cg, stacky)
    cg = ClassGroup.from_degrees(doc.degrees, doc.torsion)
    logger.info(f"Read Cox data {doc.name or '<unnamed>'}: {cg.n_rays} variables, Cl of rank {cg.free_rank}")
    return Variety(doc.name, cg, None)
