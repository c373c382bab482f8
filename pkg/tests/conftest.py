import pytest

from qmat import io


@pytest.fixture(scope="session")
def d4():
    return io.rep_from_json(io.load_corpus("d4.json"))


@pytest.fixture(scope="session")
def d4_ranks():
    return {"v0": 2, "v1": 1, "v2": 1, "v3": 1}


@pytest.fixture(scope="session")
def degenerate_flag():
    return io.rep_from_json(io.load_corpus("degenerate_flag.json"))


@pytest.fixture(scope="session")
def a2_flag():
    return io.rep_from_json(io.load_corpus("a2_flag.json"))


@pytest.fixture(scope="session")
def sign_example():
    """The three sign matroids on {1, 2} and the two matrices between them."""
    return {
        "M": io.matroid_from_json(io.load_corpus("s_example_M.json")),
        "M'": io.matroid_from_json(io.load_corpus("s_example_Mprime.json")),
        "N": io.matroid_from_json(io.load_corpus("s_example_N.json")),
        "rotation": io.morphism_from_json(io.load_corpus("s_rotation.json")),
        "projection": io.morphism_from_json(io.load_corpus("s_projection.json")),
    }
