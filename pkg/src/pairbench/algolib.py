"""Fixed algorithm corpus: 8 sorting routines in iterative and recursive form,
plus five classic/variant pairs, each with a native oracle.

Sources are static assets with anonymised function names (``main``/``f1``/...
for the sorting routines, ``f``/``g`` for the classic/variant pairs). Oracles
run the shipped source natively; differential tests check them against a
reference comparison sort and hand-derived values.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache


class UnknownIdentifier(KeyError):
    pass


@dataclass(frozen=True)
class Complexity:
    worst: str
    average: str
    best: str
    space: str


@dataclass(frozen=True)
class AlgorithmEntry:
    name: str
    style: str  # "iterative" | "recursive"
    source_text: str
    complexity: Complexity | None
    oracle_id: str
    entry_point: str
    input_kind: str  # "vector_size" | "vector" | "int"


@dataclass(frozen=True)
class VariantPair:
    base: AlgorithmEntry
    variant: AlgorithmEntry
    divergence_witness: int | tuple[int, ...]


_INSERTION_RECURSIVE = '''\
def main(array, size, start=0):
    if start >= len(array) - 1:
        return array
    min_index = start
    for j in range(start + 1, len(array)):
        if array[j] < array[min_index]:
            min_index = j
    array[start], array[min_index] = array[min_index], array[start]
    return main(array, size, start + 1)
'''

_BUBBLE_RECURSIVE = '''\
def main(list_data, length) :
    for i in range(length - 1):
        if list_data[i] > list_data[i + 1]:
            list_data[i], list_data[i + 1] = list_data[i + 1], list_data[i]
    return list_data if length<2 else main(list_data, length - 1)
'''

# The printed recursive Selection Sort duplicates the recursive Insertion Sort
# text; both are shipped as printed.
_SELECTION_RECURSIVE = _INSERTION_RECURSIVE

_ADAPTIVE_BUBBLE_RECURSIVE = '''\
def main(list_data, length) :
    swapped = False
    for i in range(length - 1):
        if list_data[i] > list_data[i + 1]:
            list_data[i], list_data[i + 1] = list_data[i + 1], list_data[i]
            swapped = True
    return list_data if not swapped else main(list_data, length - 1)
'''

_QUICK_PARTITION = '''\
def f1(array, low, high):
    pivot = array[high]
    i = low - 1
    for j in range(low, high):
        if array[j] <= pivot:
            i = i + 1
            (array[i], array[j]) = (array[j], array[i])
    (array[i + 1], array[high]) = (array[high], array[i + 1])
    return i + 1
'''

_QUICK_RECURSIVE = '''\
def main(array, high, low=0):
    if high==len(array):
        high=high-1
    if low < high:
        pi = f1(array, low, high)
        main(array,  pi - 1, low)
        main(array, high, pi + 1)
    return array

''' + _QUICK_PARTITION

_MERGE_RECURSIVE = '''\
def main(arr, r, l=0):
    if r==len(arr):
        r=r-1
    if l < r:
        m = l+(r-l)//2
        main(arr, m, l)
        main(arr, r, m+1)
        f1(arr, l, m, r)
    return arr

def f1(arr, l, m, r):
    n1 = m - l + 1
    n2 = r - m
    L = [0] * (n1)
    R = [0] * (n2)
    for i in range(0, n1):
        L[i] = arr[l + i]
    for j in range(0, n2):
        R[j] = arr[m + 1 + j]
    i = 0
    j = 0
    k = l
    while i < n1 and j < n2:
        if L[i] <= R[j]:
            arr[k] = L[i]
            i += 1
        else:
            arr[k] = R[j]
            j += 1
        k += 1
    while i < n1:
        arr[k] = L[i]
        i += 1
        k += 1
    while j < n2:
        arr[k] = R[j]
        j += 1
        k += 1
'''

_TIM_RECURSIVE = '''\
def main(lst, size):
    length = len(lst)
    runs, s_runs = [], []
    new_run = [lst[0]]
    s_array = []
    i = 1
    while i < length:
        if lst[i] < lst[i - 1]:
            runs.append(new_run)
            new_run = [lst[i]]
        else:
            new_run.append(lst[i])
        i += 1
    runs.append(new_run)
    for run in runs:
        s_runs.append(f2(run))
    for run in s_runs:
        s_array = f1(s_array, run)
    return s_array

def f1(left, right):
    if not left:
        return right
    if not right:
        return left
    if left[0] < right[0]:
        return [left[0], *f1(left[1:], right)]
    return [right[0], *f1(left, right[1:])]

def f2(lst):
    length = len(lst)
    for index in range(1, length):
        value = lst[index]
        pos = f3(lst, value, 0, index - 1)
        lst = lst[:pos] + [value] + lst[pos:index] + lst[index + 1 :]
    return lst

def f3(lst, item, start, end):
    if start == end:
        return start if lst[start] > item else start + 1
    if start > end:
        return start
    mid = (start + end) // 2
    if lst[mid] < item:
        return f3(lst, item, mid + 1, end)
    elif lst[mid] > item:
        return f3(lst, item, start, mid - 1)
    else:
        return mid
'''

_HEAP_RECURSIVE = '''\
def main(u_arr,size):
    n = len(u_arr)
    for i in range(n // 2 - 1, -1, -1):
        f1(u_arr, i, n)
    for i in range(n - 1, 0, -1):
        u_arr[0], u_arr[i] = u_arr[i], u_arr[0]
        f1(u_arr, 0, i)
    return u_arr

def f1(u_arr, index, heap_size):
    largest = index
    left_index = 2 * index + 1
    right_index = 2 * index + 2
    if left_index < heap_size and u_arr[left_index] > u_arr[largest]:
        largest = left_index

    if right_index < heap_size and u_arr[right_index] > u_arr[largest]:
        largest = right_index

    if largest != index:
        u_arr[largest], u_arr[index] = u_arr[index], u_arr[largest]
        f1(u_arr, largest, heap_size)
'''

_INSERTION_ITERATIVE = '''\
def main(arr, size):
    for j, val in enumerate(arr[1:]):
        i = j
        while j >= 0 and val < arr[j]:
            arr[j + 1] = arr[j]
            j -= 1
        if j != i:
            arr[j + 1] = val
    return arr
'''

_BUBBLE_ITERATIVE = '''\
def main(collection, size=0):
    length = len(collection)
    for i in reversed(range(length)):
        for j in range(i):
            if collection[j] > collection[j + 1]:
                collection[j], collection[j + 1] = collection[j + 1], collection[j]
    return collection
'''

# The printed iterative Selection Sort duplicates the iterative Bubble Sort
# text; both are shipped as printed.
_SELECTION_ITERATIVE = _BUBBLE_ITERATIVE

_ADAPTIVE_BUBBLE_ITERATIVE = '''\
def main(collection, size=0):
    length = len(collection)
    for i in reversed(range(length)):
        swapped = False
        for j in range(i):
            if collection[j] > collection[j + 1]:
                swapped = True
                collection[j], collection[j + 1] = collection[j + 1], collection[j]
        if not swapped:
            break
    return collection
'''

# The appendix prints the iterative driver without its partition helper; the
# partition from the recursive version is appended so the source is runnable.
_QUICK_ITERATIVE = '''\
def main(arr, h, l=0):
    if h==len(arr):
        h=h-1
    size = h - l + 1
    stack = [0] * (size)
    top = -1
    top = top + 1
    stack[top] = l
    top = top + 1
    stack[top] = h
    while top >= 0:
        h = stack[top]
        top = top - 1
        l = stack[top]
        top = top - 1
        p = f1( arr, l, h )
        if p-1 > l:
            top = top + 1
            stack[top] = l
            top = top + 1
            stack[top] = p - 1
        if p + 1 < h:
            top = top + 1
            stack[top] = p + 1
            top = top + 1
            stack[top] = h
    return arr

''' + _QUICK_PARTITION

_MERGE_ITERATIVE = '''\
def main(a, size):
    width = 1
    n = len(a)
    while (width < n):
        l=0;
        while (l < n):
            r = min(l+(width*2-1), n-1)
            m = min(l+width-1,n-1)
            f1(a, l, m, r)
            l += width*2
        width *= 2
    return a

def f1(a, l, m, r):
    n1 = m - l + 1
    n2 = r - m
    L = [0] * n1
    R = [0] * n2
    for i in range(0, n1):
        L[i] = a[l + i]
    for i in range(0, n2):
        R[i] = a[m + i + 1]
    i, j, k = 0, 0, l
    while i < n1 and j < n2:
        if L[i] <= R[j]:
            a[k] = L[i]
            i += 1
        else:
            a[k] = R[j]
            j += 1
        k += 1
    while i < n1:
        a[k] = L[i]
        i += 1
        k += 1
    while j < n2:
        a[k] = R[j]
        j += 1
        k += 1
'''

_TIM_ITERATIVE = '''\
def main(arr,n):
    min_run = 32
    n = len(arr)
    for i in range(0, n, min_run):
        f2(arr, i, min((i + min_run - 1), n - 1))
    size = min_run
    while size < n:
        for start in range(0, n, size * 2):
            middle = min((start + size - 1), (n - 1))
            end = min((start + size * 2 - 1), (n - 1))
            if middle < end:
                f1(arr, start, middle, end)
        size *= 2
    return arr

def f2(arr, left=0, right=None):
    if right is None:
        right = len(arr) - 1
    for i in range(left + 1, right + 1):
        key_item = arr[i]
        j = i - 1
        while j >= left and arr[j] > key_item:
            arr[j + 1] = arr[j]
            j -= 1
        arr[j + 1] = key_item

def f1(arr, left, middle, right):
    if arr[middle] <= arr[middle + 1]:
        return
    left_copy = arr[left:middle + 1]
    right_copy = arr[middle + 1:right + 1]
    left_copy_index = 0
    right_copy_index = 0
    s_index = left
    while left_copy_index < len(left_copy) and right_copy_index < len(right_copy):
        if left_copy[left_copy_index] <= right_copy[right_copy_index]:
            arr[s_index] = left_copy[left_copy_index]
            left_copy_index += 1
        else:
            arr[s_index] = right_copy[right_copy_index]
            right_copy_index += 1
        s_index += 1
    while left_copy_index < len(left_copy):
        arr[s_index] = left_copy[left_copy_index]
        left_copy_index += 1
        s_index += 1
    while right_copy_index < len(right_copy):
        arr[s_index] = right_copy[right_copy_index]
        right_copy_index += 1
        s_index += 1
'''

_HEAP_ITERATIVE = '''\
def main(arr, n):
    f1(arr, n)
    for i in range(n - 1, 0, -1):
        arr[0], arr[i] = arr[i], arr[0]
        j, index = 0, 0
        while True:
            index = 2 * j + 1
            if (index < (i - 1) and
                arr[index] < arr[index + 1]):
                index += 1
            if index < i and arr[j] < arr[index]:
                arr[j], arr[index] = arr[index], arr[j]
            j = index
            if index >= i:
                break
    return arr

def f1(arr, n):
    for i in range(n):
        if arr[i] > arr[int((i - 1) / 2)]:
            j = i
            while arr[j] > arr[int((j - 1) / 2)]:
                (arr[j],
                 arr[int((j - 1) / 2)]) = (arr[int((j - 1) / 2)],arr[j])
                j = int((j - 1) / 2)
'''

_FIBONACCI = '''\
def f(n):
    a, b = 0, 1
    if n <=1:
        return n
    else:
        for i in range(1, n):
            c = a + b
            a = b
            b = c
        return b
'''

_PADOVAN = '''\
def g(n):
    a, b = 1, 1
    c, d = 1, 1
    for i in range(3, n+1):
        d = a + b
        a = b
        b = c
        c = d
    return d
'''

_BUBBLE_ASCENDING = '''\
def f(v):
    n = len(v)
    for i in range(n):
        for j in range(0, n-i-1):
            if v[j] > v[j+1]:
                v[j], v[j+1] = v[j+1], v[j]
    return v
'''

_BUBBLE_DESCENDING = '''\
def g(v):
    n = len(v)
    for i in range(n):
        for j in range(0, n-i-1):
            if 0 > v[j] - v[j+1]:
                v[j], v[j+1] = v[j+1], v[j]
    return v
'''

_GAUSS_SUM = '''\
def f(n):
    tot = 0
    for i in range(n):
        tot += i
    return tot
'''

_GAUSS_SUM_ALTERNATING = '''\
def g(n):
    tot = 0
    for i in range(n):
        tot += (i if i % 2 == 0 else -i)
    return tot
'''

_IS_PRIME = '''\
def f(n):
    if n < 2: return False
    for x in range(2, int(n**0.5) + 1):
        if n % x == 0:
            return False
    return True
'''

_IS_PRIME_SUCCESSOR = '''\
def g(n):
    n = n+1
    if n < 2: return False
    for x in range(2, int(n**0.5) + 1):
        if n % x == 0:
            return False
    return True
'''

_COLLATZ_SUM = '''\
def f(n):
    s = n
    while n != 1:
        if n % 2 == 0:
            n = n // 2
        else:
            n = 3 * n + 1
        s += n
    return s
'''

_COLLATZ_SUM_EVEN = '''\
def g(n):
    s = n
    while n != 1:
        if n % 2 == 0:
            n = n // 2
            s += n
        else:
            n = 3 * n + 1
    return s
'''

_SORTING_SOURCES: dict[tuple[str, str], str] = {
    ("insertion", "iterative"): _INSERTION_ITERATIVE,
    ("insertion", "recursive"): _INSERTION_RECURSIVE,
    ("selection", "iterative"): _SELECTION_ITERATIVE,
    ("selection", "recursive"): _SELECTION_RECURSIVE,
    ("bubble", "iterative"): _BUBBLE_ITERATIVE,
    ("bubble", "recursive"): _BUBBLE_RECURSIVE,
    ("adaptive_bubble", "iterative"): _ADAPTIVE_BUBBLE_ITERATIVE,
    ("adaptive_bubble", "recursive"): _ADAPTIVE_BUBBLE_RECURSIVE,
    ("quick", "iterative"): _QUICK_ITERATIVE,
    ("quick", "recursive"): _QUICK_RECURSIVE,
    ("merge", "iterative"): _MERGE_ITERATIVE,
    ("merge", "recursive"): _MERGE_RECURSIVE,
    ("tim", "iterative"): _TIM_ITERATIVE,
    ("tim", "recursive"): _TIM_RECURSIVE,
    ("heap", "iterative"): _HEAP_ITERATIVE,
    ("heap", "recursive"): _HEAP_RECURSIVE,
}

_SORTING_ORDER = (
    "insertion",
    "selection",
    "bubble",
    "adaptive_bubble",
    "quick",
    "merge",
    "tim",
    "heap",
)

_SORTING_COMPLEXITY: dict[str, tuple[str, str, str, dict[str, str]]] = {
    "insertion": ("O(n^2)", "Θ(n^2)", "Ω(n)", {"iterative": "O(1)", "recursive": "O(n)"}),
    "selection": ("O(n^2)", "Θ(n^2)", "Ω(n^2)", {"iterative": "O(1)", "recursive": "O(n)"}),
    "bubble": ("O(n^2)", "Θ(n^2)", "Ω(n^2)", {"iterative": "O(1)", "recursive": "O(n)"}),
    "adaptive_bubble": ("O(n^2)", "Θ(n^2)", "Ω(n)", {"iterative": "O(1)", "recursive": "O(n)"}),
    "quick": ("O(n^2)", "Θ(n log n)", "Ω(n log n)", {"iterative": "O(n)", "recursive": "O(n)"}),
    "merge": ("O(n log n)", "Θ(n log n)", "Ω(n log n)", {"iterative": "O(n)", "recursive": "O(n)"}),
    "tim": ("O(n log n)", "Θ(n log n)", "Ω(n)", {"iterative": "O(1)", "recursive": "O(n)"}),
    "heap": ("O(n log n)", "Θ(n log n)", "Ω(n log n)", {"iterative": "O(1)", "recursive": "O(log n)"}),
}

_VARIANT_DEFS = (
    # (base name, base source, variant name, variant source, complexity,
    #  input kind, smallest witness search domain)
    ("fibonacci", _FIBONACCI, "padovan", _PADOVAN,
     Complexity("O(n)", "Θ(n)", "Ω(n)", "O(1)"), "int", 0),
    ("bubble_ascending", _BUBBLE_ASCENDING, "bubble_descending", _BUBBLE_DESCENDING,
     Complexity("O(n^2)", "Θ(n^2)", "Ω(n^2)", "O(1)"), "vector", None),
    ("gauss_sum", _GAUSS_SUM, "gauss_sum_alternating", _GAUSS_SUM_ALTERNATING,
     Complexity("O(n)", "Θ(n)", "Ω(n)", "O(1)"), "int", 0),
    ("is_prime", _IS_PRIME, "is_prime_successor", _IS_PRIME_SUCCESSOR,
     Complexity("O(sqrt(n))", "Θ(sqrt(n))", "Ω(1)", "O(1)"), "int", 0),
    ("collatz_sum", _COLLATZ_SUM, "collatz_sum_even", _COLLATZ_SUM_EVEN,
     None, "int", 1),
)


def _make_sorting_entry(name: str, style: str) -> AlgorithmEntry:
    worst, avg, best, space = _SORTING_COMPLEXITY[name]
    return AlgorithmEntry(
        name=name,
        style=style,
        source_text=_SORTING_SOURCES[(name, style)],
        complexity=Complexity(worst, avg, best, space[style]),
        oracle_id=f"{name}:{style}",
        entry_point="main",
        input_kind="vector_size",
    )


_CORPUS: tuple[AlgorithmEntry, ...] = tuple(
    _make_sorting_entry(name, style)
    for name in _SORTING_ORDER
    for style in ("iterative", "recursive")
)

_VARIANT_ENTRIES: dict[str, AlgorithmEntry] = {}
for _base, _bsrc, _var, _vsrc, _cx, _kind, _start in _VARIANT_DEFS:
    _VARIANT_ENTRIES[_base] = AlgorithmEntry(
        name=_base, style="iterative", source_text=_bsrc, complexity=_cx,
        oracle_id=f"{_base}:iterative", entry_point="f", input_kind=_kind,
    )
    _VARIANT_ENTRIES[_var] = AlgorithmEntry(
        name=_var, style="iterative", source_text=_vsrc, complexity=_cx,
        oracle_id=f"{_var}:iterative", entry_point="g", input_kind=_kind,
    )

_ALL_ENTRIES: dict[str, AlgorithmEntry] = {
    f"{e.name}:{e.style}": e for e in _CORPUS
}
_ALL_ENTRIES.update({e.oracle_id: e for e in _VARIANT_ENTRIES.values()})


def corpus() -> list[AlgorithmEntry]:
    """The 16 sorting entries, in the table's order, iterative before recursive."""
    return list(_CORPUS)


def get_entry(name: str, style: str = "iterative") -> AlgorithmEntry:
    key = f"{name}:{style}"
    if key not in _ALL_ENTRIES:
        raise KeyError(f"no algorithm entry {key!r}")
    return _ALL_ENTRIES[key]


@lru_cache(maxsize=None)
def _oracle_fn(oracle_id: str):
    entry = _ALL_ENTRIES[oracle_id]
    namespace: dict = {}
    exec(entry.source_text, namespace)  # static package asset, not user input
    return namespace[entry.entry_point]


def oracle_run(entry: AlgorithmEntry, input_value):
    """Run the entry's native oracle on a fresh copy of the input."""
    fn = _oracle_fn(entry.oracle_id)
    if entry.input_kind == "vector_size":
        data = list(input_value)
        return tuple(fn(data, len(data)))
    if entry.input_kind == "vector":
        return tuple(fn(list(input_value)))
    return fn(input_value)


def _int_witness(base: AlgorithmEntry, variant: AlgorithmEntry, start: int) -> int:
    for n in range(start, 21):
        if oracle_run(base, n) != oracle_run(variant, n):
            return n
    raise AssertionError(f"no divergence witness for {base.name} below 21")


def _vector_witness(base: AlgorithmEntry, variant: AlgorithmEntry) -> tuple[int, ...]:
    for length in range(4):
        for combo in itertools.product((0, 1, 2), repeat=length):
            if oracle_run(base, combo) != oracle_run(variant, combo):
                return combo
    raise AssertionError(f"no divergence witness for {base.name} on small vectors")


@lru_cache(maxsize=None)
def variant_pairs() -> tuple[VariantPair, ...]:
    """The five classic/variant pairs, each with its smallest divergence witness."""
    pairs = []
    for base_name, _, var_name, _, _, kind, start in _VARIANT_DEFS:
        base = _VARIANT_ENTRIES[base_name]
        variant = _VARIANT_ENTRIES[var_name]
        if kind == "vector":
            witness: int | tuple[int, ...] = _vector_witness(base, variant)
        else:
            witness = _int_witness(base, variant, start)
        pairs.append(VariantPair(base, variant, witness))
    return tuple(pairs)


_DEF_RE = re.compile(r"^\s*def\s+(\w+)", re.MULTILINE)


def anonymise(source: str, name_map: dict[str, str]) -> str:
    """Replace function identifiers per the map; every defined function must be
    covered (already-anonymised names pass through unchanged)."""
    defined = _DEF_RE.findall(source)
    targets = set(name_map.values())
    for name in defined:
        if name not in name_map and name not in targets:
            raise UnknownIdentifier(name)
    if not name_map:
        return source
    pattern = re.compile(
        "|".join(
            rf"\b{re.escape(k)}\b"
            for k in sorted(name_map, key=len, reverse=True)
        )
    )
    return pattern.sub(lambda m: name_map[m.group(0)], source)


def corpus_to_json() -> list[dict]:
    out = []
    for entry in _CORPUS:
        out.append(
            {
                "name": entry.name,
                "style": entry.style,
                "complexity": {
                    "worst": entry.complexity.worst,
                    "average": entry.complexity.average,
                    "best": entry.complexity.best,
                    "space": entry.complexity.space,
                },
                "source_text": entry.source_text,
            }
        )
    return out
