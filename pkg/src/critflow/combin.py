"""Partitions, Maya sets, KdV subsets, mKdV tuples of subsets, degree vectors.

A subset of Z that contains every integer from some point on is stored as
the sorted finite part below a ``tail`` together with the tail itself.  Sets
of virtual cardinal zero (Maya sets) are those whose finite part has exactly
``tail`` elements; then the finite part is s_0 < ... < s_{tail-1} and
s_j = j for j >= tail.

Tuple positions and Weyl generators are 1-based and read modulo N.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations


class CombinError(ValueError):
    pass


# ---------------------------------------------------------------- partitions

@dataclass(frozen=True)
class Partition:
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts) or any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise CombinError(f"not a partition: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self):
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def part(self, i):
        return self.parts[i] if i < len(self.parts) else 0

    def removable_boxes(self):
        """Partitions obtained by removing one corner box."""
        out = []
        for i, p in enumerate(self.parts):
            if p > self.part(i + 1):
                q = list(self.parts)
                q[i] -= 1
                out.append(Partition(tuple(q)))
        return out

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def all_partitions(weight, max_part=None):
    if max_part is None:
        max_part = weight
    if weight == 0:
        yield Partition(())
        return
    for first in range(min(weight, max_part), 0, -1):
        for rest in all_partitions(weight - first, first):
            yield Partition((first,) + rest.parts)


# ----------------------------------------------------------- tailed subsets

@dataclass(frozen=True)
class TailSet:
    """finite ∪ {tail, tail+1, ...}; finite holds elements below tail only."""
    finite: tuple = ()
    tail: int = 0

    def __post_init__(self):
        fin = sorted(set(int(s) for s in self.finite))
        tail = int(self.tail)
        fin = [s for s in fin if s < tail]
        while fin and fin[-1] == tail - 1:
            fin.pop()
            tail -= 1
        object.__setattr__(self, "finite", tuple(fin))
        object.__setattr__(self, "tail", tail)

    def __contains__(self, s):
        return s >= self.tail or s in self.finite

    @property
    def charge(self):
        """Virtual cardinal: #(S \\ Z_{>=0}) - #(Z_{>=0} \\ S)."""
        return len(self.finite) - self.tail

    def shift(self, k):
        return TailSet(tuple(s + k for s in self.finite), self.tail + k)

    def union(self, other):
        return TailSet(self.finite + other.finite, min(self.tail, other.tail))

    def add(self, *elements):
        return TailSet(self.finite + tuple(elements), self.tail)

    def issubset(self, other):
        if any(s not in other for s in self.finite):
            return False
        return all(s in other for s in range(self.tail, other.tail))

    def elements_below(self, bound):
        return [s for s in self.finite if s < bound] + list(range(self.tail, bound))

    def minimum(self):
        return self.finite[0] if self.finite else self.tail

    def as_maya(self):
        if self.charge != 0:
            raise CombinError(f"subset has virtual cardinal {self.charge}, not 0")
        return Maya(self.finite, self.tail)

    def __str__(self):
        head = ",".join(str(s) for s in self.finite + (self.tail, self.tail + 1))
        return "{" + head + ",...}"


class Maya(TailSet):
    """Subset of virtual cardinal zero: exceptional prefix plus threshold."""

    def __post_init__(self):
        super().__post_init__()
        if self.charge != 0:
            raise CombinError(f"{self.finite} with threshold {self.tail} is not of virtual cardinal zero")

    @property
    def exceptional(self):
        return self.finite

    @property
    def threshold(self):
        return self.tail

    def element(self, i):
        return self.finite[i] if i < self.tail else i

    def to_json(self):
        return {"exceptional": list(self.finite), "threshold": self.tail}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["exceptional"]), data["threshold"])

    @classmethod
    def empty(cls):
        return cls((), 0)


def maya_to_partition(S: Maya) -> Partition:
    return Partition(tuple(i - s for i, s in enumerate(S.finite)))


def partition_to_maya(lam: Partition) -> Maya:
    n = len(lam.parts)
    return Maya(tuple(i - lam.parts[i] for i in range(n)), n)


def weight(S) -> int:
    return maya_to_partition(S).weight


# ---------------------------------------------------------------- KdV sets

@dataclass(frozen=True)
class KdVSet:
    base: Maya
    N: int

    def __post_init__(self):
        if self.N < 2:
            raise CombinError("N must be at least 2")
        if not isinstance(self.base, Maya):
            object.__setattr__(self, "base", TailSet(self.base.finite, self.base.tail).as_maya())
        if not self.base.shift(self.N).issubset(self.base):
            raise CombinError(f"{self.base} is not a KdV subset for N={self.N}")

    @property
    def partition(self):
        return maya_to_partition(self.base)


def is_kdv(S: TailSet, N: int) -> bool:
    return S.charge == 0 and S.shift(N).issubset(S)


def leading_term(S: KdVSet):
    """A = S \\ (S+N), sorted."""
    shifted = S.base.shift(S.N)
    A = [s for s in S.base.elements_below(S.base.tail + S.N) if s not in shifted]
    return sorted(A)


def from_leading_term(A, N) -> KdVSet:
    A = sorted(A)
    top = max(A) + N
    elems = set()
    for a in A:
        elems.update(range(a, top, N))
    return KdVSet(TailSet(tuple(elems), top).as_maya(), N)


def validate_leading(A, N) -> bool:
    """Sum N(N-1)/2 and pairwise distinct residues mod N."""
    A = list(A)
    return len(A) == N and sum(A) == N * (N - 1) // 2 and len({a % N for a in A}) == N


def mutate_kdv(S: KdVSet, a: int) -> KdVSet:
    """S[a] = {a+1-N} ∪ (S+1)."""
    if a not in leading_term(S):
        raise CombinError(f"{a} is not in the leading term {leading_term(S)}")
    return KdVSet(S.base.shift(1).add(a + 1 - S.N).as_maya(), S.N)


def width(S: KdVSet) -> int:
    A = leading_term(S)
    return A[-1] - A[0]


def reduce_kdv_to_empty(S: KdVSet):
    """Mutate at the largest leading element until the width is N-1."""
    steps = []
    while width(S) > S.N - 1:
        a = leading_term(S)[-1]
        S2 = mutate_kdv(S, a)
        if width(S2) >= width(S):
            raise CombinError("width did not decrease")
        steps.append(a)
        S = S2
    if S.base != Maya.empty():
        raise CombinError(f"width N-1 reached at {S.base}, not the empty set")
    return steps


# --------------------------------------------------------- mKdV set tuples

@dataclass(frozen=True)
class MKdVSetTuple:
    members: tuple

    def __post_init__(self):
        mem = tuple(m if isinstance(m, KdVSet) else KdVSet(m, len(self.members)) for m in self.members)
        object.__setattr__(self, "members", mem)
        N = len(mem)
        if any(m.N != N for m in mem):
            raise CombinError("tuple length differs from N")
        for i in range(N):
            if not mem[i].base.shift(1).issubset(mem[(i + 1) % N].base):
                raise CombinError(f"S_{i + 1} + 1 is not contained in S_{(i + 1) % N + 1}")

    @property
    def N(self):
        return len(self.members)

    def __getitem__(self, i):
        """1-based, cyclic."""
        return self.members[(i - 1) % self.N]

    def partitions(self):
        return tuple(m.partition for m in self.members)

    def weights(self):
        return tuple(p.weight for p in self.partitions())

    @classmethod
    def empty(cls, N):
        return cls(tuple(KdVSet(Maya.empty(), N) for _ in range(N)))

    def to_json(self):
        return [m.base.to_json() for m in self.members]


def build_tuple(S: KdVSet, sigma) -> MKdVSetTuple:
    """S_i = {a_σ(1)+i-N, ..., a_σ(i)+i-N} ∪ (S+i), A sorted increasingly."""
    N = S.N
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, N + 1)):
        raise CombinError(f"{sigma} is not a permutation of 1..{N}")
    A = leading_term(S)
    members = []
    for i in range(1, N + 1):
        extra = [A[sigma[k] - 1] + i - N for k in range(i)]
        members.append(KdVSet(S.base.shift(i).add(*extra).as_maya(), N))
    return MKdVSetTuple(tuple(members))


def decompose_tuple(T: MKdVSetTuple):
    """Inverse of build_tuple: returns (S_N, σ)."""
    N = T.N
    S = T[N]
    A = leading_term(S)
    sigma = []
    for i in range(1, N + 1):
        prev = T[i - 1].base.shift(1)
        bound = max(T[i].base.tail, prev.tail)
        new = [s for s in T[i].base.elements_below(bound) if s not in prev]
        if len(new) != 1:
            raise CombinError("tuple does not have one new element per step")
        a = new[0] - i + N
        sigma.append(A.index(a) + 1)
    return S, tuple(sigma)


def mutate_tuple(T: MKdVSetTuple, i: int) -> MKdVSetTuple:
    """The unique mKdV tuple differing from T exactly at position i."""
    N = T.N
    low = T[i - 1].base.shift(1)
    high = T[i + 1].base.shift(-1)
    bound = max(high.tail, low.tail)
    cand = [s for s in high.elements_below(bound) if s not in low]
    if len(cand) != 2:
        raise CombinError("neighbours do not leave exactly two choices")
    cur = [s for s in T[i].base.elements_below(bound) if s not in low]
    other = cand[1] if cur == [cand[0]] else cand[0]
    new = KdVSet(low.add(other).as_maya(), N)
    members = list(T.members)
    members[(i - 1) % N] = new
    return MKdVSetTuple(tuple(members))


def reduction_index(T: MKdVSetTuple):
    """Smallest i with min S_i = s_min < min S_{i+1}; None for the empty tuple."""
    N = T.N
    mins = [T[i].base.minimum() for i in range(1, N + 1)]
    if all(m.base == Maya.empty() for m in T.members):
        return None
    s_min = min(mins)
    for i in range(1, N + 1):
        if mins[i - 1] == s_min and mins[i % N] > s_min:
            return i
    raise CombinError("no position realizes the minimum strictly")


def reduce_tuple_to_empty(T: MKdVSetTuple):
    steps = []
    while True:
        i = reduction_index(T)
        if i is None:
            return steps
        T2 = mutate_tuple(T, i)
        if sum(T2.weights()) >= sum(T.weights()):
            raise CombinError(f"mutation at {i} does not decrease total weight")
        steps.append(i)
        T = T2


def replay_tuple(T: MKdVSetTuple, indices):
    for i in indices:
        T = mutate_tuple(T, i)
    return T


def all_tuples(S: KdVSet):
    return [build_tuple(S, p) for p in permutations(range(1, S.N + 1))]


# ----------------------------------------------------------- degree vectors

def degree_transform(k, j: int):
    k = list(k)
    N = len(k)
    jj = (j - 1) % N
    k[jj] = k[jj - 1] + k[(jj + 1) % N] - k[jj] + 1
    return tuple(k)


def degree_chain(J, N):
    k = (0,) * N
    out = []
    for j in J:
        k = degree_transform(k, j)
        out.append(k)
    return out


def degree_vector(J, N):
    k = (0,) * N
    for j in J:
        k = degree_transform(k, j)
    return k


def is_degree_increasing(J, N) -> bool:
    k = (0,) * N
    for j in J:
        k2 = degree_transform(k, j)
        if k2[(j - 1) % N] <= k[(j - 1) % N]:
            return False
        k = k2
    return True


def cyclic_sequence(m, N):
    return tuple((i % N) + 1 for i in range(m))
