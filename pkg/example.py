import math

from gbvlab.models import ModelTag
from gbvlab.phases import PhaseSet, Variant, exceptional_S
from gbvlab.pool import worker_pool
from gbvlab.pruefer import JacobiCoeffs
from gbvlab.sequences import wigner_von_neumann
from gbvlab.sequences.builders import WvnTerm
from gbvlab.spectral import convergence_diagnostic, resonance_scan


def main():
    phi = math.pi / 2
    potential = wigner_von_neumann([WvnTerm(lam=1.0, phi=phi, alpha=0.0, gamma=1.0)])
    coeffs = JacobiCoeffs.schroedinger(potential.sequence)
    exceptional = exceptional_S(
        PhaseSet(potential.phases), 2, ModelTag.OPRL, Variant.OPRL
    )
    print("Exceptional points:")
    for point in exceptional:
        flag = " (boundary)" if point.boundary else ""
        print(f"  * eta={point.eta:.4f}  x={point.point:+.4f}{flag}")

    with worker_pool() as mapper:
        report = resonance_scan(
            coeffs, exceptional, (0.25, -0.25), 10 ** 5, mapper=mapper, chunks=4
        )
        print(f"Power-law fits over [N/10, N], N={report.steps}:")
        for point in report.points:
            kind = "candidate" if point.is_candidate else "control"
            print(f"  * {kind:9} eta={point.eta:.4f}  slope={point.slope:+.4f}")
        for eta, note in report.skipped:
            print(f"  * skipped eta={eta:.4f}: {note}")

        convergence = convergence_diagnostic(
            coeffs,
            (phi + 0.3, phi + 1.0),
            64,
            [1000, 5000, 20000],
            exceptional=exceptional,
            mapper=mapper,
            chunks=4,
        )
        print(f"Away from the resonance: {convergence.verdict.value}")


if __name__ == "__main__":
    main()
