"""
Exception hierarchy. Every error also derives from the closest builtin so callers
can catch either.
"""

class GensiftError(Exception):
    pass

class StructuralError(GensiftError, ValueError):
    """Malformed element, group, generator file or straight-line program."""
    pass

class ContractError(GensiftError, ValueError):
    """A caller broke an operation's precondition (bad e, ε or p)."""
    pass

class ChainSpecError(GensiftError, ValueError):
    def __init__(self, message: str, path: str = None, line: int = None, field: str = None):
        self.path = path
        self.line = line
        self.field = field

        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")

        super().__init__(f"{': '.join(where)}: {message}" if where else message)

class CompileError(GensiftError, ValueError):
    def __init__(self, message: str, step: int = None):
        self.step = step
        super().__init__(f"step {step}: {message}" if step is not None else message)

class EnumerationOverflow(GensiftError, RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"enumeration exceeded cap of {cap} elements")

class SiftingTripleError(GensiftError, ValueError):
    def __init__(self, clause: str, witness=None):
        self.clause = clause
        self.witness = witness
        super().__init__(f"sifting triple violated ({clause}), witness h = {witness}")

class ConditionAError(GensiftError, ValueError):
    def __init__(self, step: int, representative=None):
        self.step = step
        self.representative = representative
        super().__init__(f"class of {representative} in L_{step} does not meet L_{step + 1}")

class ConsistencyError(GensiftError, AssertionError):
    pass

class ReconstructionError(GensiftError, RuntimeError):
    """A chain builder found no subgroup or witness with the shape its table asks for."""
    pass
