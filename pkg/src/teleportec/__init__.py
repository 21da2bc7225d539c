"""Stabilizer-code simulation with teleportation-based error correction.

Core layers: exact GF(2)/symplectic algebra (`gf2`), phase-exact Pauli
products (`pauli`), the stabilizer-code calculus (`codes`), frame-level
teleportation steps (`teleport`), a dense statevector oracle (`dense`),
and noise/threshold estimation (`noise`).  A FastAPI service
(`teleportec.service`) wraps the package; the CLI (`teleportec.cli`) is
a thin client of that service.
"""

__version__ = "0.1.0"
