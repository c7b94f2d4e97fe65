"""
app/schema.py
Wire models for the JSON config file.

{
  "rank": 4,                                   # r^2, a perfect square
  "vertices": [{"id": "E", "self_intersection": -3, "genus": 1, "ram_index": 2}],
  "edges":    [{"a": "E1", "b": "E2", "mult": 1}],
  "curves":   [{"id": "D1", "ram_index": 2, "meets": {"E": 3}, "distinct_points": {"E": 3}}]
}
Defaults: genus 0, ram_index 1, mult 1.
"""
from __future__ import annotations

from math import isqrt
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, StrictInt, field_validator, model_validator

from core.model import Edge, OrderConfig, RamCurve, ResolutionGraph, Vertex


class VertexIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    self_intersection: StrictInt = Field(lt=0)
    genus: StrictInt = Field(0, ge=0)
    ram_index: StrictInt = Field(1, ge=1)


class EdgeIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    a: str
    b: str
    mult: StrictInt = Field(1, ge=1)


class CurveIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    ram_index: StrictInt = Field(ge=2)
    meets: Dict[str, StrictInt] = Field(default_factory=dict)
    distinct_points: Optional[Dict[str, StrictInt]] = None
    crosses: Dict[str, StrictInt] = Field(default_factory=dict)


class ConfigFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rank: StrictInt = Field(ge=1)
    vertices: List[VertexIn] = Field(default_factory=list)
    edges: List[EdgeIn] = Field(default_factory=list)
    curves: List[CurveIn] = Field(default_factory=list)

    @field_validator("rank")
    @classmethod
    def rank_is_square(cls, v: int) -> int:
        if isqrt(v) ** 2 != v:
            raise ValueError("rank must be a perfect square")
        return v

    @model_validator(mode="after")
    def references_resolve(self) -> "ConfigFile":
        vids = [v.id for v in self.vertices]
        cids = [c.id for c in self.curves]
        if len(set(vids)) != len(vids):
            raise ValueError("duplicate vertex id")
        if len(set(cids)) != len(cids):
            raise ValueError("duplicate curve id")
        known = set(vids)
        for i, e in enumerate(self.edges):
            for end in (e.a, e.b):
                if end not in known:
                    raise ValueError(f"edges.{i} refers to unknown vertex {end!r}")
        for i, c in enumerate(self.curves):
            for vid in list(c.meets) + list(c.distinct_points or {}):
                if vid not in known:
                    raise ValueError(f"curves.{i} refers to unknown vertex {vid!r}")
            for other in c.crosses:
                if other not in cids:
                    raise ValueError(f"curves.{i} crosses unknown curve {other!r}")
        return self

    @property
    def rank_root(self) -> int:
        return isqrt(self.rank)

    def to_config(self) -> OrderConfig:
        graph = ResolutionGraph(
            tuple(Vertex(v.id, v.self_intersection, v.genus) for v in self.vertices),
            tuple(Edge(e.a, e.b, e.mult) for e in self.edges),
        )
        curves = tuple(
            RamCurve(c.id, c.ram_index, dict(c.meets), dict(c.distinct_points) if c.distinct_points else None, dict(c.crosses))
            for c in self.curves
        )
        return OrderConfig(graph, {v.id: v.ram_index for v in self.vertices}, curves, self.rank_root)

    @classmethod
    def from_config(cls, config: OrderConfig) -> "ConfigFile":
        vertices = [
            VertexIn(id=v.id, self_intersection=v.self_intersection, genus=v.genus, ram_index=config.e(v.id))
            for v in config.graph.vertices
        ]
        edges = [EdgeIn(a=e.a, b=e.b, mult=e.mult) for e in config.graph.edges]
        curves = [
            CurveIn(
                id=c.id,
                ram_index=c.index,
                meets=dict(c.meets),
                distinct_points=dict(c.distinct_points),
                crosses=dict(c.crosses),
            )
            for c in config.curves
        ]
        return cls(rank=config.r2, vertices=vertices, edges=edges, curves=curves)
