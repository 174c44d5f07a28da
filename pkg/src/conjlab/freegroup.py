"""Free-group words and the Cayley tree.

Words are tuples of nonzero ints: letter +k is the k-th generator, -k its
inverse (k = 1..rank).  Reduced words are exactly the vertices of the
Cayley tree, where all geometry is exact: distance is the length of the
freely reduced quotient, geodesics are common-prefix splices.
"""

from __future__ import annotations

from .errors import InputError

__all__ = [
    "ALPHABET",
    "freduce",
    "fmul",
    "finv",
    "fpow",
    "parse_free_word",
    "format_free_word",
    "shortlex_key",
    "common_prefix_len",
    "tree_distance",
    "tree_geodesic",
    "cyclic_reduce",
    "primitive_root",
]

ALPHABET = "abcdefgh"


def parse_free_word(text: str, rank: int = 2) -> tuple:
    """Same token syntax as RAAG words over generators a, b, c, ..."""
    names = {ALPHABET[i]: i + 1 for i in range(rank)}
    out = []
    for tok in text.split():
        name, sep, exp = tok.partition("^")
        if name not in names:
            raise InputError("unknown free generator %r (rank %d)" % (name, rank))
        if not sep:
            power = 1
        else:
            try:
                power = int(exp)
            except ValueError:
                raise InputError("bad token %r" % (tok,)) from None
        letter = names[name] if power > 0 else -names[name]
        out.extend([letter] * abs(power))
    return freduce(out)


def format_free_word(word) -> str:
    return " ".join(
        ALPHABET[x - 1] if x > 0 else ALPHABET[-x - 1] + "^-1" for x in word
    )


def freduce(letters) -> tuple:
    out = []
    for x in letters:
        if x == 0:
            raise InputError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def fmul(u, v) -> tuple:
    out = list(u)
    for x in v:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def finv(u) -> tuple:
    return tuple(-x for x in reversed(u))


def fpow(u, n: int) -> tuple:
    if n < 0:
        return fpow(finv(u), -n)
    out = ()
    for _ in range(n):
        out = fmul(out, u)
    return out


def shortlex_key(word):
    # a < a^-1 < b < b^-1 < ...
    return (len(word), tuple((abs(x) << 1) | (x < 0) for x in word))


def common_prefix_len(u, v) -> int:
    n = 0
    for x, y in zip(u, v):
        if x != y:
            break
        n += 1
    return n


def tree_distance(u, v) -> int:
    k = common_prefix_len(u, v)
    return (len(u) - k) + (len(v) - k)


def tree_geodesic(u, v):
    """Vertices from u to v: back down to the common prefix, then up to v."""
    k = common_prefix_len(u, v)
    path = [tuple(u[:i]) for i in range(len(u), k, -1)]
    path.extend(tuple(v[:i]) for i in range(k, len(v) + 1))
    return path


def cyclic_reduce(w):
    """(p, core) with w = p . core . p^-1 and core cyclically reduced."""
    w = freduce(w)
    p = []
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        p.append(w[lo])
        lo += 1
        hi -= 1
    return tuple(p), w[lo:hi]


def primitive_root(h) -> tuple:
    """(root, n) with h = root^n, root primitive, n maximal.

    The root is returned in the original coordinates: if the cyclic
    reduction is h = p c p^-1 and c = r0^n with r0 primitive, the root is
    p r0 p^-1.
    """
    h = freduce(h)
    if not h:
        raise InputError("the identity has no primitive root")
    p, core = cyclic_reduce(h)
    n = len(core)
    for d in range(1, n + 1):
        if n % d:
            continue
        r0 = core[:d]
        if all(core[i : i + d] == r0 for i in range(0, n, d)):
            root = fmul(fmul(p, r0), finv(p))
            return root, n // d
    raise AssertionError("unreachable")
