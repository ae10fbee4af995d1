"""Data-driven shoulder inverse kinematics.

Maps two humeral orientation angles (elevation theta, plane-of-elevation
psi) to SC, AC, and GH joint rotations by bi-spherical squad
interpolation over a measured 22x3 motion grid, with forward kinematics
out to the elbow, dataset tooling, and a CLI / HTTP shell.
"""

from .database import (
    AxisMismatchError,
    DatabaseError,
    DuplicateCellError,
    GridAxes,
    IncompleteGridError,
    JointRotationGrid,
    MotionDatabase,
    ParseError,
    UnitsError,
    export_csv,
    generate_synthetic,
    get,
    load_csv,
)
from .quat import DegenerateQuaternionError
from .shoulder import (
    EulerSequence,
    EulerTriple,
    GimbalSingularityError,
    JointId,
    LandmarkSet,
    ShoulderPose,
    SkeletonConfig,
    euler_to_quat,
    forward_kinematics,
    joint_sequence,
    quat_to_euler,
)
from .solver import (
    InterpolationCell,
    OutOfRangeError,
    PoseInput,
    SolveOptions,
    select_cell,
    solve,
    sweep,
)

__all__ = [
    "AxisMismatchError",
    "DatabaseError",
    "DegenerateQuaternionError",
    "DuplicateCellError",
    "EulerSequence",
    "EulerTriple",
    "GimbalSingularityError",
    "GridAxes",
    "IncompleteGridError",
    "InterpolationCell",
    "JointId",
    "JointRotationGrid",
    "LandmarkSet",
    "MotionDatabase",
    "OutOfRangeError",
    "ParseError",
    "PoseInput",
    "ShoulderPose",
    "SkeletonConfig",
    "SolveOptions",
    "UnitsError",
    "euler_to_quat",
    "export_csv",
    "forward_kinematics",
    "generate_synthetic",
    "get",
    "joint_sequence",
    "load_csv",
    "quat_to_euler",
    "select_cell",
    "solve",
    "sweep",
]

__version__ = "0.1.0"
