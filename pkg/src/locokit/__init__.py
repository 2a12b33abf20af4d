"""locokit: a self-contained cross-platform robot control framework.

One robot description drives everything: model parsing, rigid-body
kinematics/dynamics, a fixed-rate joint impedance loop, interchangeable
simulator / mock-hardware backends behind a single ``real_robot`` flag,
a high-level controller hierarchy, and a browser visualizer.
"""

__version__ = "0.1.0"
