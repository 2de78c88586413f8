import numpy as np
import pytest

from advice_csp import fileio
from advice_csp.advice import LabelAdvice, SubsetAdvice, gen_label_advice, gen_subset_advice
from advice_csp.errors import ParseError
from advice_csp.instances import KLinInstance, plant_bipartite_regular, plant_klin


@pytest.fixture
def instance():
    return KLinInstance(
        k=3,
        n=6,
        constraints=(
            ((0, 1, 2), 1, 1.0),
            ((3, 4, 5), -1, 2.5),
            ((1, 3, 5), 1, 0.125),
        ),
    )


def test_instance_round_trip(tmp_path, instance):
    path = tmp_path / "inst.klin"
    fileio.write_instance(path, instance)
    back = fileio.read_instance(path)
    assert back.k == instance.k and back.n == instance.n
    assert back.constraints == instance.constraints


def test_weights_round_trip_bit_exact(tmp_path):
    inst = KLinInstance(k=2, n=2, constraints=(((0, 1), 1, 0.1 + 0.2),))
    path = tmp_path / "w.klin"
    fileio.write_instance(path, inst)
    assert fileio.read_instance(path).constraints[0][2] == 0.1 + 0.2


def test_graph_round_trip(tmp_path):
    plant = plant_bipartite_regular(16, 3, 0.0, seed=0)
    path = tmp_path / "graph.klin"
    fileio.write_instance(path, plant.instance)
    back = fileio.read_instance(path)
    assert back.k == 2 and back.m == len(plant.instance.edges)
    graph = fileio.instance_to_graph(back)
    assert graph.edges == plant.instance.edges


def test_crlf_and_comments_accepted(tmp_path):
    body = "# a comment\r\np klin 2 3 2\r\n\r\n0 1 +1 1.0\r\n1 2 -1 2.0\r\n"
    lf = tmp_path / "lf.klin"
    crlf = tmp_path / "crlf.klin"
    lf.write_bytes(body.replace("\r\n", "\n").encode())
    crlf.write_bytes(body.encode())
    assert fileio.read_instance(lf).constraints == fileio.read_instance(crlf).constraints


def test_bad_rhs_names_line(tmp_path):
    path = tmp_path / "bad.klin"
    path.write_text("p klin 2 3 1\n0 1 2 1.0\n")
    with pytest.raises(ParseError) as err:
        fileio.read_instance(path)
    assert ":2:" in str(err.value)


def test_index_out_of_range(tmp_path):
    path = tmp_path / "bad.klin"
    path.write_text("p klin 2 3 1\n0 9 +1 1.0\n")
    with pytest.raises(ParseError):
        fileio.read_instance(path)


def test_malformed_header(tmp_path):
    path = tmp_path / "bad.klin"
    path.write_text("p maxsat 2 3 1\n")
    with pytest.raises(ParseError):
        fileio.read_instance(path)


def test_count_mismatch(tmp_path):
    path = tmp_path / "bad.klin"
    path.write_text("p klin 2 3 2\n0 1 +1 1.0\n")
    with pytest.raises(ParseError):
        fileio.read_instance(path)


def test_mixed_arity_round_trip(tmp_path):
    inst = KLinInstance(k=2, n=3, constraints=(((0,), 1, 1.0), ((1, 2), -1, 2.0)))
    path = tmp_path / "mixed.klin"
    fileio.write_instance(path, inst)
    assert fileio.read_instance(path).constraints == inst.constraints


def test_assignment_round_trip(tmp_path):
    plant = plant_klin(9, 3, 10, 0.1, seed=1)
    path = tmp_path / "assign.txt"
    fileio.write_assignment(path, plant.x_star)
    assert np.array_equal(fileio.read_assignment(path), plant.x_star)


def test_assignment_bad_value(tmp_path):
    path = tmp_path / "assign.txt"
    path.write_text("s assign 2\n+1\n2\n")
    with pytest.raises(ParseError):
        fileio.read_assignment(path)


def test_label_advice_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    adv = gen_label_advice(rng.choice([-1, 1], size=20), 0.375, seed=4)
    path = tmp_path / "advice.txt"
    fileio.write_advice(path, adv)
    back = fileio.read_advice(path)
    assert isinstance(back, LabelAdvice)
    assert back.epsilon == adv.epsilon
    assert np.array_equal(back.values, adv.values)


def test_subset_advice_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    adv = gen_subset_advice(rng.choice([-1, 1], size=20), 0.4, seed=6)
    path = tmp_path / "advice.txt"
    fileio.write_advice(path, adv)
    back = fileio.read_advice(path)
    assert isinstance(back, SubsetAdvice)
    assert back.n == adv.n and back.epsilon == adv.epsilon
    assert np.array_equal(back.indices, adv.indices)
    assert np.array_equal(back.values, adv.values)
