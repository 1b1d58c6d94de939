"""Instruction registry for the stack VM.

Every instruction is a total function on the machine state: if its operands
are missing it is a no-op, never an error. Instructions that consume code
blocks declare how many they open (`opens`); genome translation attaches
that many blocks after them.

Stack naming: ints / bools / strs / vecs (integer vectors, stored as
tuples) / exec.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


@dataclass(frozen=True)
class Instruction:
    name: str
    fn: Callable
    opens: int = 0

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Literal:
    """A typed constant gene; executing it pushes `value` onto `stack`."""

    stack: str  # "int" | "bool" | "str" | "vec"
    value: object

    @property
    def name(self) -> str:
        return f"lit:{self.stack}:{self.value!r}"

    def __repr__(self):
        return self.name


class _CloseToken:
    """Genome token that closes the innermost open code block."""

    name = "close"

    def __repr__(self):
        return "close"


CLOSE = _CloseToken()

INSTRUCTIONS: dict[str, Instruction] = {}


def _register(name, opens=0):
    def deco(fn):
        INSTRUCTIONS[name] = Instruction(name=name, fn=fn, opens=opens)
        return fn

    return deco


# ---------------------------------------------------------------------------
# integer
# ---------------------------------------------------------------------------

@_register("int_add")
def _int_add(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        s.ints[-1] = s.ints[-1] + b


@_register("int_sub")
def _int_sub(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        s.ints[-1] = s.ints[-1] - b


@_register("int_mult")
def _int_mult(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        s.ints[-1] = s.ints[-1] * b


@_register("int_quot")
def _int_quot(s):
    # protected: division by zero is a no-op
    if len(s.ints) >= 2 and s.ints[-1] != 0:
        b = s.ints.pop()
        a = s.ints.pop()
        q = abs(a) // abs(b)
        s.ints.append(q if (a >= 0) == (b >= 0) else -q)


@_register("int_mod")
def _int_mod(s):
    if len(s.ints) >= 2 and s.ints[-1] != 0:
        b = s.ints.pop()
        s.ints[-1] = s.ints[-1] % b


@_register("int_inc")
def _int_inc(s):
    if s.ints:
        s.ints[-1] += 1


@_register("int_dec")
def _int_dec(s):
    if s.ints:
        s.ints[-1] -= 1


@_register("int_abs")
def _int_abs(s):
    if s.ints:
        s.ints[-1] = abs(s.ints[-1])


@_register("int_max")
def _int_max(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        s.ints[-1] = max(s.ints[-1], b)


@_register("int_min")
def _int_min(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        s.ints[-1] = min(s.ints[-1], b)


@_register("int_eq")
def _int_eq(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        a = s.ints.pop()
        s.bools.append(a == b)


@_register("int_gt")
def _int_gt(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        a = s.ints.pop()
        s.bools.append(a > b)


@_register("int_lt")
def _int_lt(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        a = s.ints.pop()
        s.bools.append(a < b)


@_register("int_gte")
def _int_gte(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        a = s.ints.pop()
        s.bools.append(a >= b)


@_register("int_lte")
def _int_lte(s):
    if len(s.ints) >= 2:
        b = s.ints.pop()
        a = s.ints.pop()
        s.bools.append(a <= b)


@_register("int_from_bool")
def _int_from_bool(s):
    if s.bools:
        s.ints.append(1 if s.bools.pop() else 0)


@_register("int_from_string")
def _int_from_string(s):
    if s.strs:
        try:
            s.ints.append(int(s.strs[-1]))
            s.strs.pop()
        except ValueError:
            pass


@_register("int_dup")
def _int_dup(s):
    if s.ints:
        s.ints.append(s.ints[-1])


@_register("int_swap")
def _int_swap(s):
    if len(s.ints) >= 2:
        s.ints[-1], s.ints[-2] = s.ints[-2], s.ints[-1]


@_register("int_rot")
def _int_rot(s):
    if len(s.ints) >= 3:
        s.ints.append(s.ints.pop(-3))


@_register("int_pop")
def _int_pop(s):
    if s.ints:
        s.ints.pop()


# ---------------------------------------------------------------------------
# boolean
# ---------------------------------------------------------------------------

@_register("bool_and")
def _bool_and(s):
    if len(s.bools) >= 2:
        b = s.bools.pop()
        s.bools[-1] = s.bools[-1] and b


@_register("bool_or")
def _bool_or(s):
    if len(s.bools) >= 2:
        b = s.bools.pop()
        s.bools[-1] = s.bools[-1] or b


@_register("bool_not")
def _bool_not(s):
    if s.bools:
        s.bools[-1] = not s.bools[-1]


@_register("bool_xor")
def _bool_xor(s):
    if len(s.bools) >= 2:
        b = s.bools.pop()
        s.bools[-1] = s.bools[-1] != b


@_register("bool_eq")
def _bool_eq(s):
    if len(s.bools) >= 2:
        b = s.bools.pop()
        s.bools[-1] = s.bools[-1] == b


@_register("bool_from_int")
def _bool_from_int(s):
    if s.ints:
        s.bools.append(s.ints.pop() != 0)


@_register("bool_dup")
def _bool_dup(s):
    if s.bools:
        s.bools.append(s.bools[-1])


@_register("bool_pop")
def _bool_pop(s):
    if s.bools:
        s.bools.pop()


# ---------------------------------------------------------------------------
# string
# ---------------------------------------------------------------------------

@_register("str_concat")
def _str_concat(s):
    if len(s.strs) >= 2:
        b = s.strs.pop()
        s.strs[-1] = s.strs[-1] + b


@_register("str_length")
def _str_length(s):
    if s.strs:
        s.ints.append(len(s.strs.pop()))


@_register("str_reverse")
def _str_reverse(s):
    if s.strs:
        s.strs[-1] = s.strs[-1][::-1]


@_register("str_from_int")
def _str_from_int(s):
    if s.ints:
        s.strs.append(str(s.ints.pop()))


@_register("str_from_bool")
def _str_from_bool(s):
    if s.bools:
        s.strs.append("true" if s.bools.pop() else "false")


@_register("str_take")
def _str_take(s):
    if s.ints and s.strs:
        n = s.ints.pop()
        s.strs[-1] = s.strs[-1][: max(0, n)]


@_register("str_rest")
def _str_rest(s):
    if s.strs:
        s.strs[-1] = s.strs[-1][1:]


@_register("str_butlast")
def _str_butlast(s):
    if s.strs:
        s.strs[-1] = s.strs[-1][:-1]


@_register("str_first")
def _str_first(s):
    if s.strs and s.strs[-1]:
        s.strs[-1] = s.strs[-1][0]


@_register("str_ord")
def _str_ord(s):
    # code point of the first character
    if s.strs and s.strs[-1]:
        s.ints.append(ord(s.strs.pop()[0]))


@_register("str_contains")
def _str_contains(s):
    if len(s.strs) >= 2:
        b = s.strs.pop()
        a = s.strs.pop()
        s.bools.append(b in a)


@_register("str_eq")
def _str_eq(s):
    if len(s.strs) >= 2:
        b = s.strs.pop()
        a = s.strs.pop()
        s.bools.append(a == b)


@_register("str_dup")
def _str_dup(s):
    if s.strs:
        s.strs.append(s.strs[-1])


@_register("str_swap")
def _str_swap(s):
    if len(s.strs) >= 2:
        s.strs[-1], s.strs[-2] = s.strs[-2], s.strs[-1]


@_register("str_pop")
def _str_pop(s):
    if s.strs:
        s.strs.pop()


# ---------------------------------------------------------------------------
# integer vector
# ---------------------------------------------------------------------------

@_register("vec_length")
def _vec_length(s):
    if s.vecs:
        s.ints.append(len(s.vecs.pop()))


@_register("vec_first")
def _vec_first(s):
    if s.vecs and s.vecs[-1]:
        s.ints.append(s.vecs.pop()[0])


@_register("vec_last")
def _vec_last(s):
    if s.vecs and s.vecs[-1]:
        s.ints.append(s.vecs.pop()[-1])


@_register("vec_nth")
def _vec_nth(s):
    # index wraps modulo length; empty vector is a no-op
    if s.ints and s.vecs and s.vecs[-1]:
        n = s.ints.pop()
        v = s.vecs.pop()
        s.ints.append(v[n % len(v)])


@_register("vec_rest")
def _vec_rest(s):
    if s.vecs:
        s.vecs[-1] = s.vecs[-1][1:]


@_register("vec_butlast")
def _vec_butlast(s):
    if s.vecs:
        s.vecs[-1] = s.vecs[-1][:-1]


@_register("vec_is_empty")
def _vec_is_empty(s):
    if s.vecs:
        s.bools.append(len(s.vecs.pop()) == 0)


@_register("vec_contains")
def _vec_contains(s):
    if s.ints and s.vecs:
        n = s.ints.pop()
        s.bools.append(n in s.vecs.pop())


@_register("vec_dup")
def _vec_dup(s):
    if s.vecs:
        s.vecs.append(s.vecs[-1])


@_register("vec_pop")
def _vec_pop(s):
    if s.vecs:
        s.vecs.pop()


# ---------------------------------------------------------------------------
# exec (code-block manipulation)
# ---------------------------------------------------------------------------

@_register("exec_if", opens=2)
def _exec_if(s):
    if s.bools and len(s.exec) >= 2:
        keep_first = s.bools.pop()
        first = s.exec.pop()
        second = s.exec.pop()
        s.exec.append(first if keep_first else second)


@_register("exec_when", opens=1)
def _exec_when(s):
    if s.bools and s.exec:
        if not s.bools.pop():
            s.exec.pop()


@_register("exec_dup", opens=1)
def _exec_dup(s):
    if s.exec:
        s.exec.append(s.exec[-1])


@_register("exec_pop", opens=1)
def _exec_pop(s):
    if s.exec:
        s.exec.pop()


@_register("exec_swap", opens=2)
def _exec_swap(s):
    if len(s.exec) >= 2:
        s.exec[-1], s.exec[-2] = s.exec[-2], s.exec[-1]


@_register("exec_do_times", opens=1)
def _exec_do_times(s):
    # repetition count clamped; the step limit bounds total work anyway
    if s.ints and s.exec:
        n = min(s.ints.pop(), 512)
        body = s.exec.pop()
        if n > 0:
            s.exec.extend([body] * n)


@_register("vec_do_each", opens=1)
def _vec_do_each(s):
    # run the block once per element, element pushed to the int stack first
    if s.vecs and s.exec:
        v = s.vecs.pop()
        body = s.exec.pop()
        for x in reversed(v):
            s.exec.append(body)
            s.exec.append(Literal("int", x))
