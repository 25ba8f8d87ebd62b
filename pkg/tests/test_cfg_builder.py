import networkx as nx

from models.cfg_graph import CfgNodeKind
from services.cfg_builder import build_cfg
from tests.support import node_id


def test_loop_program_graph(set_loop_cfg):
    cfg = set_loop_cfg
    assert len(cfg) == 11
    assert len(cfg.edges()) == 12
    assert cfg.entry == 0
    assert cfg.exit == 10

    head = node_id(cfg, "i <= n")
    branch = node_id(cfg, "x < 0")
    assert cfg.nodes[head].kind == CfgNodeKind.COND
    assert cfg.succ(head) == (node_id(cfg, "read(x)"), cfg.exit)
    assert cfg.succ(branch) == (node_id(cfg, "xs.delete"), node_id(cfg, "xs.insert"))
    assert cfg.back_edges == {(node_id(cfg, "i := i + 1"), head)}


def test_loop_record(set_loop_cfg):
    [loop] = set_loop_cfg.loops
    assert loop.head == node_id(set_loop_cfg, "i <= n")
    assert node_id(set_loop_cfg, "z := xs.size()") in loop.body
    assert node_id(set_loop_cfg, "i := 1") not in loop.body
    assert set_loop_cfg.default_loop_bound() == 2


def test_node_effects(set_loop_cfg):
    insert = set_loop_cfg.nodes[node_id(set_loop_cfg, "xs.insert")]
    assert insert.defs == {"xs"}
    assert insert.uses == {"xs", "x"}


def test_branches_rejoin(simple_cfg):
    cond = node_id(simple_cfg, "x > y")
    then_id, else_id = simple_cfg.succ(cond)
    assert simple_cfg.succ(then_id) == (simple_cfg.exit,)
    assert simple_cfg.succ(else_id) == (simple_cfg.exit,)
    assert simple_cfg.default_loop_bound() == 1


def test_if_without_else_falls_through(mini_unit):
    cfg = build_cfg(mini_unit("if (a > 0) {\n  a := 0\n}\nb := a\n"))
    cond = node_id(cfg, "a > 0")
    assert cfg.succ(cond) == (node_id(cfg, "a := 0"), node_id(cfg, "b := a"))


def test_empty_program_links_entry_to_exit(mini_unit):
    cfg = build_cfg(mini_unit(""))
    assert len(cfg) == 2
    assert cfg.succ(cfg.entry) == (cfg.exit,)


def test_every_ast_reference_is_indexed(set_loop_cfg):
    for node in set_loop_cfg.nodes:
        if node.ast_ref is not None:
            assert set_loop_cfg.node_of_ast[node.ast_ref] == node.id
    assert not set_loop_cfg.unreachable
    assert not set_loop_cfg.dead_ends


def test_networkx_view_marks_uncovered_nodes(set_loop_cfg):
    delete = node_id(set_loop_cfg, "xs.delete")
    covered = set(range(len(set_loop_cfg))) - {delete}
    graph = set_loop_cfg.to_networkx(covered)

    assert graph.nodes[delete]["kind"] == CfgNodeKind.ASSUME_FALSE.value
    assert graph.out_degree(delete) == 0
    assert nx.has_path(graph, set_loop_cfg.entry, set_loop_cfg.exit)


def test_graphml_export(set_loop_cfg, tmp_path):
    path = tmp_path / "cfg.graphml"
    set_loop_cfg.write_graphml(str(path))
    graph = nx.read_graphml(str(path))
    assert graph.number_of_nodes() == 11
    assert graph.number_of_edges() == 12
