from dataclasses import dataclass

from app.imaginet.numcore import Vector


@dataclass(frozen=True)
class GruStepTrace:
    """
    Activations of one GRU timestep, retained for the backward pass.

    Attributes:
        z (Vector): Update gate.
        r (Vector): Reset gate.
        h_cand (Vector): Candidate activation.
        h (Vector): New hidden state.
        x (Vector): Input at this step.
        h_prev (Vector): Hidden state entering the step.
    """

    z: Vector
    r: Vector
    h_cand: Vector
    h: Vector
    x: Vector
    h_prev: Vector
