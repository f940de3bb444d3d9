import xml.etree.ElementTree as ET

import pytest

from sixfold.certificates import model_for
from sixfold.render import RenderError, curves_for, render


def test_render_is_deterministic():
    assert render(5, "lemma3.2") == render(5, "lemma3.2")


def test_render_labels_every_edge():
    svg = render(5)
    root = ET.fromstring(svg)
    texts = [t.text for t in root.iter("{http://www.w3.org/2000/svg}text")]
    assert len(texts) == model_for(5).n_edges
    # six-fold symmetry: each slit label appears once per sector
    assert all(texts.count(t.split(".")[0] + f".{s}") == 1 for t in texts for s in range(6))


def test_commtrick_overlay_has_four_curves():
    names = [n for n, _ in curves_for(model_for(5), "lemma3.2")]
    assert names == ["c", "a2c", "a4c", "d"]


def test_unknown_overlay():
    with pytest.raises(RenderError, match="no such curve"):
        render(5, "figure9")
