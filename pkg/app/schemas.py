"""Request bodies for the HTTP API."""

from pydantic import BaseModel, Field

from app.harness.experiments import Method


class MeshRequest(BaseModel):
    x: list[float] = Field(..., min_length=2, description="Strictly monotone nodes.")


class SamplesRequest(MeshRequest):
    y: list[float] = Field(..., min_length=2, description="Values at the nodes.")
    method: Method = Method.COMPACT4
    dleft: float | None = Field(None, description="Left end derivative (spline-clamped).")
    dright: float | None = Field(None, description="Right end derivative (spline-clamped).")
