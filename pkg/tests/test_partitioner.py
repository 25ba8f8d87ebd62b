import pytest

from models.partition import CoverageMap, Partition
from services.cfg_builder import build_cfg
from services.partitioner import Partitioner, coverage_oracle, gen_partitions
from utils.exceptions import CoverageExplosionError
from tests.support import node_id, partition_where


def test_loop_program_has_four_partitions(set_loop_cfg):
    partitions = gen_partitions(set_loop_cfg)
    delete = node_id(set_loop_cfg, "xs.delete")
    insert = node_id(set_loop_cfg, "xs.insert")
    read = node_id(set_loop_cfg, "read(x)")

    assert len(partitions) == 4
    assert {p.coverage for p in partitions} == coverage_oracle(set_loop_cfg, 2)
    partition_where(partitions, avoids=[read])
    partition_where(partitions, covers=[delete], avoids=[insert])
    partition_where(partitions, covers=[insert], avoids=[delete])
    partition_where(partitions, covers=[delete, insert])


def test_partition_paths_run_entry_to_exit(set_loop_cfg):
    for index, part in enumerate(gen_partitions(set_loop_cfg)):
        assert part.discovery_index == index
        assert part.repr_path[0] == set_loop_cfg.entry
        assert part.repr_path[-1] == set_loop_cfg.exit
        for src, dst in zip(part.repr_path, part.repr_path[1:]):
            assert dst in set_loop_cfg.succ(src)


def test_true_branch_is_explored_first(simple_cfg):
    first, second = gen_partitions(simple_cfg)
    assert node_id(simple_cfg, "z := x + 2") in first.coverage
    assert node_id(simple_cfg, "z := x * y") in second.coverage


def test_straight_line_program_has_one_partition(mini_unit):
    cfg = build_cfg(mini_unit("x := 1\ny := x + 1\n"))
    [only] = gen_partitions(cfg)
    assert only.coverage == frozenset(range(len(cfg)))


def test_cap_stops_emission(set_loop_cfg):
    partitioner = Partitioner(set_loop_cfg, max_partitions=2)
    assert len(partitioner.run()) == 2
    assert partitioner.capped
    assert partitioner.visits > 0


def test_cap_equal_to_count_is_not_reported(simple_cfg):
    partitioner = Partitioner(simple_cfg, max_partitions=2)
    assert len(partitioner.run()) == 2
    assert not partitioner.capped


def test_sequential_branches_multiply(mini_unit):
    cfg = build_cfg(mini_unit(
        "if (a > 0) { b := 1 } else { b := 2 }\nif (c > 0) { d := 1 } else { d := 2 }\n"
    ))
    assert len(gen_partitions(cfg)) == 4


def test_oracle_walk_budget(set_loop_cfg):
    with pytest.raises(CoverageExplosionError):
        coverage_oracle(set_loop_cfg, 2, walk_budget=3)


def test_oracle_bound_limits_loop_iterations(set_loop_cfg):
    assert len(coverage_oracle(set_loop_cfg, 0)) == 1
    assert len(coverage_oracle(set_loop_cfg, 1)) == 3


def test_partition_rejects_mismatched_coverage():
    with pytest.raises(ValueError):
        Partition((0, 1), frozenset({0}), 0)


def test_coverage_map_is_exact():
    covmap = CoverageMap()
    assert covmap.check_and_insert(1, frozenset({0, 1}))
    assert not covmap.check_and_insert(1, frozenset({1, 0}))
    assert covmap.check_and_insert(1, frozenset({0, 1, 2}))
    assert len(covmap) == 2
