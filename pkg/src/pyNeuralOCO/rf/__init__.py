"""Random-feature teachers and the neural tangent kernel estimator."""

from .ntk import NtkEstimate, arccos_kernel, ntk_estimate
from .teacher import RfTeacher, eval_teacher, load_teacher, sample_teacher, save_teacher, teacher_for_student

__all__ = [
    "NtkEstimate",
    "arccos_kernel",
    "ntk_estimate",
    "RfTeacher",
    "eval_teacher",
    "load_teacher",
    "sample_teacher",
    "save_teacher",
    "teacher_for_student",
]
