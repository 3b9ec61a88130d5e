from .bump import integral_g, moment_M, phi, psi
from .bumptrain import BumpTrainPdf, build_bump_train, log_moment, pdf_eval
from .mixture import TrapezoidMixture
from .star import StarPdf, build_star_pdf, compute_KM

__all__ = [
    "BumpTrainPdf",
    "StarPdf",
    "TrapezoidMixture",
    "build_bump_train",
    "build_star_pdf",
    "compute_KM",
    "integral_g",
    "log_moment",
    "moment_M",
    "pdf_eval",
    "phi",
    "psi",
]
