"""
Straight-line programs: words in the standard generators recorded as instruction lists.

Lines 0..slots-1 are the inputs; instruction k defines line slots+k. Every instruction
refers only to inputs or earlier lines. Result -1 denotes the identity.

Textual form, one instruction per line after a header:

    slots=2 result=3
    MUL 0 1
    INV 2
"""

from collections import namedtuple

from blackbox.operations import power
from errors import StructuralError

MUL = 'MUL'
INV = 'INV'
POW = 'POW'

PRODUCT = 'product'
INVERSE_OF_FIRST = 'inverse-of-first'

IDENTITY_LINE = -1

# For POW, `b` is the exponent; for INV it is unused
Instruction = namedtuple('Instruction', ['op', 'a', 'b'])

class StraightLineProgram:
    """ Immutable straight-line program.

    A program may be a prefix view of a longer shared instruction list (see SLPBuilder),
    in which case only the first `size` instructions belong to it.

    Args:
        slots (int): number of inputs
        instructions (sequence[Instruction]): instruction list
        result (int): line holding the value, or -1 for the identity
        size (int, optional): number of leading instructions that belong to this program
    """
    __slots__ = ('slots', 'result', '_lines', '_size')

    def __init__(self, slots: int, instructions=(), result: int = IDENTITY_LINE, size: int = None):
        if slots < 1:
            raise StructuralError(f"a program needs at least one input slot, got {slots}")
        self.slots = slots
        self._lines = instructions
        self._size = len(instructions) if size is None else size
        self.result = result
        self._check()

    def _check(self):
        # Builders only append valid lines, so views of a builder tape skip the per-line scan
        if self.result < IDENTITY_LINE or self.result >= self.slots + self._size:
            raise StructuralError(f"result line {self.result} out of range")

    @classmethod
    def identity(cls, slots: int) -> 'StraightLineProgram':
        return cls(slots)

    @classmethod
    def generator(cls, slots: int, index: int) -> 'StraightLineProgram':
        if not 0 <= index < slots:
            raise StructuralError(f"generator {index} out of range for {slots} slots")
        return cls(slots, (), index)

    @property
    def instructions(self) -> tuple:
        return tuple(self._lines[:self._size])

    @property
    def is_identity(self) -> bool:
        return self.result == IDENTITY_LINE

    def __len__(self):
        return self._size

    def __eq__(self, other):
        if not isinstance(other, StraightLineProgram):
            return NotImplemented
        return (self.slots, self.result, self.instructions) == (other.slots, other.result, other.instructions)

    def __hash__(self):
        return hash((self.slots, self.result, self.instructions))

    def __repr__(self):
        return f"StraightLineProgram(slots={self.slots}, result={self.result}, length={self._size})"

    def evaluate(self, gens: list):
        """ Evaluate on a generator tuple. Every MUL and INV line costs one counted operation.

        Args:
            gens (list[GroupElement]): one element per slot

        Returns:
            GroupElement: the value of the result line
        """
        gens = list(gens)
        if len(gens) != self.slots:
            raise StructuralError(f"program has {self.slots} slots but {len(gens)} generators were given")
        if self.result == IDENTITY_LINE:
            return gens[0].identity()

        values = gens
        for i in range(self._size):
            op, a, b = self._lines[i]
            if op == MUL:
                values.append(values[a] * values[b])
            elif op == INV:
                values.append(values[a].inverse())
            else:
                values.append(power(values[a], b))
            if len(values) > self.result:
                break
        return values[self.result]

    def pruned(self) -> 'StraightLineProgram':
        """Equivalent program keeping only the lines the result depends on."""
        if self.result < self.slots:
            return StraightLineProgram(self.slots, (), self.result)

        # Walk the dependencies of the result only; a shared tape may be much longer
        needed = {self.result}
        stack = [self.result]
        while stack:
            op, a, b = self._lines[stack.pop() - self.slots]
            for ref in ((a, b) if op == MUL else (a,)):
                if ref >= self.slots and ref not in needed:
                    needed.add(ref)
                    stack.append(ref)

        renumber = {i: i for i in range(self.slots)}
        kept = []
        for line in sorted(n for n in needed if n >= self.slots):
            op, a, b = self._lines[line - self.slots]
            renumber[line] = self.slots + len(kept)
            kept.append(Instruction(op, renumber[a], renumber[b] if op == MUL else b))
        return StraightLineProgram(self.slots, tuple(kept), renumber[self.result])

    def to_text(self) -> str:
        lines = [f"slots={self.slots} result={self.result}"]
        for op, a, b in self.instructions:
            lines.append(f"{op} {a}" if op == INV else f"{op} {a} {b}")
        return "\n".join(lines)

    @classmethod
    def parse(cls, text: str) -> 'StraightLineProgram':
        return cls.from_lines([line for line in text.splitlines() if line.strip()])

    @classmethod
    def from_lines(cls, lines: list) -> 'StraightLineProgram':
        """ Parse a header line followed by instruction lines.

        Raises:
            StructuralError: malformed header or instruction, or a forward/out-of-range reference
        """
        if not lines:
            raise StructuralError("empty program text")

        header = dict(field.split('=', 1) for field in lines[0].split() if '=' in field)
        try:
            slots, result = int(header['slots']), int(header['result'])
        except (KeyError, ValueError):
            raise StructuralError(f"bad program header {lines[0]!r}, expected 'slots=k result=r'")

        instructions = []
        for text in lines[1:]:
            fields = text.split()
            try:
                op = fields[0]
                if op == INV and len(fields) == 2:
                    instruction = Instruction(INV, int(fields[1]), None)
                elif op in (MUL, POW) and len(fields) == 3:
                    instruction = Instruction(op, int(fields[1]), int(fields[2]))
                else:
                    raise ValueError
            except (IndexError, ValueError):
                raise StructuralError(f"bad instruction {text!r}")

            line = slots + len(instructions)
            refs = [instruction.a, instruction.b] if op == MUL else [instruction.a]
            if any(not 0 <= r < line for r in refs):
                raise StructuralError(f"instruction {text!r} on line {line} refers to a later or missing line")
            if op == POW and instruction.b < 0:
                raise StructuralError(f"negative exponent in {text!r}")
            instructions.append(instruction)

        return cls(slots, tuple(instructions), result)

class SLPBuilder:
    """ Append-only instruction tape.

    Programs handed out by `program()` are prefix views of the tape, so recording a long
    run of product replacement steps never copies earlier instructions. Line -1 is the
    identity and is absorbed by `mul`/`inv`.

    Args:
        slots (int): number of inputs
    """
    def __init__(self, slots: int):
        self.slots = slots
        self._lines = []

    def __len__(self):
        return len(self._lines)

    def _append(self, instruction: Instruction) -> int:
        self._lines.append(instruction)
        return self.slots + len(self._lines) - 1

    def mul(self, a: int, b: int) -> int:
        if a == IDENTITY_LINE:
            return b
        if b == IDENTITY_LINE:
            return a
        return self._append(Instruction(MUL, a, b))

    def inv(self, a: int) -> int:
        if a == IDENTITY_LINE:
            return a
        return self._append(Instruction(INV, a, None))

    def pow(self, a: int, n: int) -> int:
        if a == IDENTITY_LINE or n == 0:
            return IDENTITY_LINE
        if n == 1:
            return a
        return self._append(Instruction(POW, a, n))

    def inline(self, program: StraightLineProgram) -> int:
        """ Copy a program's instructions onto the tape.

        Returns:
            int: tape line holding the program's result
        """
        if program.slots != self.slots:
            raise StructuralError(f"cannot inline a {program.slots}-slot program into a {self.slots}-slot tape")
        if program.result < program.slots:
            return program.result

        offset = len(self._lines)
        def remap(line):
            return line if line < self.slots else line + offset

        for op, a, b in program.instructions:
            self._lines.append(Instruction(op, remap(a), remap(b) if op == MUL else b))
        return remap(program.result)

    def program(self, result: int) -> StraightLineProgram:
        return StraightLineProgram(self.slots, self._lines, result, size=len(self._lines))

def slp_compose(a: StraightLineProgram, b: StraightLineProgram = None, mode: str = PRODUCT) -> StraightLineProgram:
    """ Combine two programs over the same slots.

    `product` evaluates to eval(a)·eval(b); `inverse-of-first` evaluates to eval(a)^-1·eval(b),
    or to eval(a)^-1 when b is None. An identity operand is absorbed, so the result has
    length len(a) + len(b) + 1 only when neither operand is the identity.
    """
    if b is not None and a.slots != b.slots:
        raise StructuralError(f"slot mismatch: {a.slots} vs {b.slots}")
    if mode not in (PRODUCT, INVERSE_OF_FIRST):
        raise StructuralError(f"unknown compose mode {mode!r}")
    if mode == PRODUCT and b is None:
        raise StructuralError("product needs two programs")

    builder = SLPBuilder(a.slots)
    left = builder.inline(a)
    if mode == INVERSE_OF_FIRST:
        left = builder.inv(left)
    right = builder.inline(b) if b is not None else IDENTITY_LINE
    return builder.program(builder.mul(left, right))

def slp_evaluate(w: StraightLineProgram, gens: list):
    return w.evaluate(gens)

def slp_length(w: StraightLineProgram) -> int:
    return len(w)
