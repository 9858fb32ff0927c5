import numpy as np
import pytest

from solvtree import (
    Leaf,
    LearnerParams,
    ModelFormatError,
    SolvencyClass,
    Split,
    TreeModel,
    grow,
    parse,
    read_model,
    render_text,
    serialize,
    write_model,
)

from oracles import make_dataset


def _random_model(rng):
    n = int(rng.integers(4, 30))
    rows = [tuple(float(v) for v in rng.normal(size=2)) for _ in range(n)]
    labels = [int(v) for v in rng.integers(0, 4, size=n)]
    return grow(make_dataset(rows, labels))


class TestRoundTrip:
    def test_random_corpus(self):
        rng = np.random.default_rng(77)
        for _ in range(40):
            model = _random_model(rng)
            assert parse(serialize(model)) == model

    def test_awkward_threshold_round_trips(self):
        model = TreeModel(
            Split("V3", 1.0 / 3.0,
                  Leaf((2, 0, 0, 0), SolvencyClass.INSOLVENCY),
                  Leaf((0, 0, 0, 2), SolvencyClass.STRONG)),
            LearnerParams(confidence_factor=0.1, min_leaf=3, max_depth=7),
            ("V3", "V5"),
            (4, (2, 0, 0, 2)),
        )
        again = parse(serialize(model))
        assert again == model
        assert again.root.threshold == 1.0 / 3.0

    def test_file_round_trip(self, tmp_path):
        model = _random_model(np.random.default_rng(5))
        path = tmp_path / "model.tree"
        write_model(model, path)
        assert read_model(path) == model


class TestParseErrors:
    def _text(self):
        model = _random_model(np.random.default_rng(9))
        return serialize(model)

    def test_bad_format_line(self):
        with pytest.raises(ModelFormatError) as exc_info:
            parse("something-else 9\n")
        assert exc_info.value.line == 1

    def test_truncated(self):
        text = self._text()
        lines = text.splitlines()
        with pytest.raises(ModelFormatError, match="unexpected end"):
            parse("\n".join(lines[:-1]))

    def test_trailing_content(self):
        with pytest.raises(ModelFormatError, match="trailing"):
            parse(self._text() + "leaf 1 0 0 0\n")

    def test_bad_node_line_number(self):
        text = self._text()
        lines = text.splitlines()
        lines[6] = "bogus line"
        with pytest.raises(ModelFormatError) as exc_info:
            parse("\n".join(lines))
        assert exc_info.value.line == 7

    def test_unknown_schema_attribute(self):
        text = self._text().replace("schema V1,V2", "schema V1,V99")
        with pytest.raises(ModelFormatError, match="V99"):
            parse(text)

    def test_bad_counts(self):
        model = TreeModel(
            Leaf((1, 0, 0, 0), SolvencyClass.INSOLVENCY), LearnerParams(), ("V1",), (1, (1, 0, 0, 0))
        )
        text = serialize(model).replace("leaf 1 0 0 0", "leaf 0 0 0 0")
        with pytest.raises(ModelFormatError, match="positive total"):
            parse(text)


class TestRenderText:
    def test_single_leaf_one_line(self):
        model = TreeModel(
            Leaf((0, 0, 0, 9), SolvencyClass.STRONG), LearnerParams(), ("V1",), (9, (0, 0, 0, 9))
        )
        assert render_text(model) == "strong [0 0 0 9]\n"

    def test_depth_two_indentation(self):
        model = TreeModel(
            Split(
                "V1", 1.5,
                Leaf((3, 0, 0, 0), SolvencyClass.INSOLVENCY),
                Split(
                    "V2", 0.75,
                    Leaf((0, 2, 0, 0), SolvencyClass.WEAK),
                    Leaf((0, 0, 0, 4), SolvencyClass.STRONG),
                ),
            ),
            LearnerParams(),
            ("V1", "V2"),
            (9, (3, 2, 0, 4)),
        )
        text = render_text(model)
        assert text == (
            "V1 <= 1.5: insolvency [3 0 0 0]\n"
            "V1 > 1.5:\n"
            "|   V2 <= 0.75: weak [0 2 0 0]\n"
            "|   V2 > 0.75: strong [0 0 0 4]\n"
        )
        assert "|   |   " not in text
