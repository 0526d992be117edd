"""Checks that the compiled and vectorized kernels agree everywhere."""

import os
import random
import subprocess
import sys

import numpy as np

from argcl.kernels import (
    NUMBA_AVAILABLE,
    OP_AND,
    OP_IMP,
    OP_MAJ,
    OP_NIMP,
    OP_OR,
    OP_XOR3,
    filter_models,
    filter_models_numba,
    filter_models_numpy,
    kernel_mode,
    pair_closure,
    pair_closure_numpy,
    triple_closure,
    triple_closure_numpy,
)


def naive_filter(n_vars, tables, positions):
    out = []
    for a in range(1 << n_vars):
        ok = True
        for table, pos in zip(tables, positions):
            k = len(pos)
            idx = 0
            for j, p in enumerate(pos):
                idx |= ((a >> (n_vars - 1 - p)) & 1) << (k - 1 - j)
            if not table[idx]:
                ok = False
                break
        out.append(ok)
    return out


def naive_pair(members, table, op, full_mask):
    for a in members:
        for b in members:
            a, b = int(a), int(b)
            if op == OP_AND:
                r = a & b
            elif op == OP_OR:
                r = a | b
            elif op == OP_IMP:
                r = (~a & full_mask) | b
            else:
                r = a & ~b & full_mask
            if not table[r]:
                return False
    return True


def naive_triple(members, table, op):
    ints = [int(m) for m in members]
    for a in ints:
        for b in ints:
            for c in ints:
                r = (a & b) | (a & c) | (b & c) if op == OP_MAJ else a ^ b ^ c
                if not table[r]:
                    return False
    return True


def random_case(rng, max_vars=6, max_constraints=4):
    n_vars = rng.randint(1, max_vars)
    tables = []
    positions = []
    for _ in range(rng.randint(0, max_constraints)):
        k = rng.randint(1, min(3, n_vars))
        rows = [rng.random() < 0.6 for _ in range(1 << k)]
        tables.append(np.array(rows, dtype=np.bool_))
        positions.append(tuple(rng.sample(range(n_vars), k)))
    return n_vars, tables, positions


class TestKernelMode:
    def test_mode_is_known(self):
        assert kernel_mode() in ("numba", "numpy")

    def test_default_prefers_numba(self):
        if os.environ.get("ARGCL_KERNEL", "auto") == "auto" and NUMBA_AVAILABLE:
            assert kernel_mode() == "numba"


class TestFilterModels:
    def test_frozen_or2(self):
        table = np.array([False, True, True, True])
        for impl in (filter_models_numpy, filter_models_numba, filter_models):
            assert impl(2, [table], [(0, 1)]).tolist() == [False, True, True, True]

    def test_assignment_bit_order(self):
        # Variable p lives in bit (n_vars - 1 - p) of the assignment index.
        on = np.array([False, True])
        mask = filter_models_numpy(3, [on], [(0,)])
        assert mask.tolist() == [a >= 4 for a in range(8)]
        mask = filter_models_numpy(3, [on], [(2,)])
        assert mask.tolist() == [a % 2 == 1 for a in range(8)]

    def test_no_constraints(self):
        assert filter_models_numpy(3, [], []).all()
        assert filter_models_numba(3, [], []).all()

    def test_implementations_agree(self):
        rng = random.Random(402)
        for _ in range(120):
            n_vars, tables, positions = random_case(rng)
            want = naive_filter(n_vars, tables, positions)
            assert filter_models_numpy(n_vars, tables, positions).tolist() == want
            assert filter_models_numba(n_vars, tables, positions).tolist() == want

    def test_dispatcher_matches_mode(self):
        table = np.array([True, False, False, True])
        got = filter_models(2, [table], [(1, 0)])
        assert got.tolist() == naive_filter(2, [table], [(1, 0)])


class TestPairClosure:
    def test_or2_closures(self):
        members = np.array([0b01, 0b10, 0b11], dtype=np.int64)
        table = np.array([False, True, True, True])
        assert pair_closure(members, table, OP_OR, 3)
        assert not pair_closure(members, table, OP_AND, 3)

    def test_implication_ops(self):
        # imp(a, a) is all-ones, so OR2 is imp-closed while NAND is not.
        or2 = np.array([0b01, 0b10, 0b11], dtype=np.int64)
        or2_table = np.array([False, True, True, True])
        assert pair_closure(or2, or2_table, OP_IMP, 3)
        nand = np.array([0b00, 0b01, 0b10], dtype=np.int64)
        nand_table = np.array([True, True, True, False])
        assert pair_closure(nand, nand_table, OP_NIMP, 3)
        assert not pair_closure(nand, nand_table, OP_IMP, 3)

    def test_agrees_with_naive(self):
        rng = random.Random(403)
        for _ in range(150):
            arity = rng.randint(1, 4)
            full = (1 << arity) - 1
            size = rng.randint(1, full + 1)
            members = np.array(rng.sample(range(full + 1), size), dtype=np.int64)
            table = np.zeros(full + 1, dtype=np.bool_)
            table[members] = True
            for extra in range(full + 1):
                if rng.random() < 0.2:
                    table[extra] = True
            for op in (OP_AND, OP_OR, OP_IMP, OP_NIMP):
                want = naive_pair(members, table, op, full)
                assert pair_closure(members, table, op, full) == want
                assert pair_closure_numpy(members, table, op, full) == want


class TestTripleClosure:
    def test_parity_relation_is_xor_closed(self):
        members = np.array([0b000, 0b011, 0b101, 0b110], dtype=np.int64)
        table = np.zeros(8, dtype=np.bool_)
        table[members] = True
        assert triple_closure(members, table, OP_XOR3)

    def test_disequality_is_majority_closed(self):
        members = np.array([0b01, 0b10], dtype=np.int64)
        table = np.array([False, True, True, False])
        assert triple_closure(members, table, OP_MAJ)

    def test_one_in_three_fails_both(self):
        members = np.array([0b100, 0b010, 0b001], dtype=np.int64)
        table = np.zeros(8, dtype=np.bool_)
        table[members] = True
        assert not triple_closure(members, table, OP_MAJ)
        assert not triple_closure(members, table, OP_XOR3)

    def test_agrees_with_naive(self):
        rng = random.Random(404)
        for _ in range(100):
            arity = rng.randint(1, 3)
            full = (1 << arity) - 1
            size = rng.randint(1, full + 1)
            members = np.array(rng.sample(range(full + 1), size), dtype=np.int64)
            table = np.zeros(full + 1, dtype=np.bool_)
            table[members] = True
            for op in (OP_MAJ, OP_XOR3):
                want = naive_triple(members, table, op)
                assert triple_closure(members, table, op) == want
                assert triple_closure_numpy(members, table, op) == want


class TestEnvFlag:
    def run_probe(self, value):
        env = dict(os.environ)
        env["ARGCL_KERNEL"] = value
        return subprocess.run(
            [sys.executable, "-c", "from argcl.kernels import kernel_mode; print(kernel_mode())"],
            capture_output=True,
            text=True,
            env=env,
        )

    def test_numpy_override(self):
        probe = self.run_probe("numpy")
        assert probe.returncode == 0
        assert probe.stdout.strip() == "numpy"

    def test_bad_value_rejected(self):
        probe = self.run_probe("fortran")
        assert probe.returncode != 0
        assert "ARGCL_KERNEL" in probe.stderr

    def test_results_identical_across_modes(self):
        # The flag may change speed, never answers.
        code = (
            "from argcl import parse_relations, classify_complexity;"
            "lang = parse_relations('relation NAE3 3 { 001 010 011 100 101 110 }');"
            "r = classify_complexity(lang);"
            "print(r.arg, r.argcheck, r.argrel)"
        )
        outs = []
        for value in ("numpy", "numba"):
            env = dict(os.environ)
            env["ARGCL_KERNEL"] = value
            probe = subprocess.run(
                [sys.executable, "-c", code], capture_output=True, text=True, env=env
            )
            assert probe.returncode == 0
            outs.append(probe.stdout)
        assert outs[0] == outs[1]
        assert outs[0] == "SigmaP2-complete DP-complete SigmaP2-complete\n"
