"""The bounded finite model of program states."""

from .model import (
    Heap,
    EMPTY_HEAP,
    Stack,
    ProgState,
    disjoint_union,
    heap_partitions,
    heap_includes,
    check_value,
    store_var,
    is_address,
    free_blocks,
    block_heap,
)
from .enumeration import enumerate_heaps, enumerate_stacks, enumerate_states, heap_extensions, heap_count
from .literals import parse_state_literal, render_state, render_heap

__all__ = [
    "Heap",
    "EMPTY_HEAP",
    "Stack",
    "ProgState",
    "disjoint_union",
    "heap_partitions",
    "heap_includes",
    "check_value",
    "store_var",
    "is_address",
    "free_blocks",
    "block_heap",
    "enumerate_heaps",
    "enumerate_stacks",
    "enumerate_states",
    "heap_extensions",
    "heap_count",
    "parse_state_literal",
    "render_state",
    "render_heap",
]
