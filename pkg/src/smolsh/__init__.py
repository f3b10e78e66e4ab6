"""smolsh: an executable small-step semantics for the POSIX shell.

The package exposes two drivers over a common evaluator: a real shell
(``smolsh``) that performs effects through the host kernel, and a symbolic
stepper (``smolsh-step``) that runs scripts against a simulated OS and emits
JSON traces.
"""

__version__ = "0.1.0"
