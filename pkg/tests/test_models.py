import math

import numpy as np
import pytest
from pydantic import ValidationError

from normdescent.core.exceptions import InvalidArgumentError, ShapeError
from normdescent.models.dataset import Dataset, make_dataset, normalize_rows
from normdescent.models.gradcheck import central_difference, relative_error
from normdescent.models.linear import (
    LinearModel,
    majorization_gap,
    spectral_sharpness,
    square_loss,
    square_loss_grad,
)
from normdescent.models.two_layer import TwoLayerNet, two_layer_forward_backward
from normdescent.services.io import (
    read_dataset_csv,
    read_dataset_json,
    write_dataset_csv,
    write_dataset_json,
)


@pytest.fixture
def data():
    return make_dataset(d_in=6, d_out=3, n=40, seed=11, noise=0.1)


class TestDataset:
    def test_inputs_live_on_the_sphere(self, data):
        np.testing.assert_allclose(np.linalg.norm(data.inputs, axis=1), math.sqrt(6), rtol=1e-12)
        assert (data.n, data.d_in, data.d_out) == (40, 6, 3)

    def test_same_seed_same_data(self, data):
        again = make_dataset(d_in=6, d_out=3, n=40, seed=11, noise=0.1)
        np.testing.assert_array_equal(again.inputs, data.inputs)
        np.testing.assert_array_equal(again.targets, data.targets)
        other = make_dataset(d_in=6, d_out=3, n=40, seed=12, noise=0.1)
        assert not np.array_equal(other.inputs, data.inputs)

    def test_rejects_off_sphere_inputs(self):
        with pytest.raises(ValidationError):
            Dataset(inputs=np.array([[1.0, 0.0]]), targets=np.array([[0.0]]))

    def test_rejects_mismatched_targets(self):
        with pytest.raises(ValidationError):
            Dataset(inputs=np.array([[1.0], [1.0]]), targets=np.array([[0.0]]))

    def test_normalize_rows(self):
        np.testing.assert_allclose(normalize_rows(np.array([[3.0, 4.0]])), [[0.6 * math.sqrt(2), 0.8 * math.sqrt(2)]])
        with pytest.raises(InvalidArgumentError):
            normalize_rows(np.zeros((1, 2)))

    @pytest.mark.parametrize("kwargs", [{"n": 0}, {"d_in": 0}, {"noise": -1.0}])
    def test_invalid_arguments(self, kwargs):
        args = {"d_in": 2, "d_out": 1, "n": 4, "seed": 0, **kwargs}
        with pytest.raises(InvalidArgumentError):
            make_dataset(**args)

    def test_csv_roundtrip(self, data, tmp_path):
        path = write_dataset_csv(tmp_path / "data.csv", data)
        assert path.read_text().splitlines()[0] == "x0,x1,x2,x3,x4,x5,y0,y1,y2"
        back = read_dataset_csv(path)
        np.testing.assert_allclose(back.inputs, data.inputs, rtol=1e-15)
        np.testing.assert_allclose(back.targets, data.targets, rtol=1e-15)

    def test_json_keeps_the_hidden_map(self, data, tmp_path):
        back = read_dataset_json(write_dataset_json(tmp_path / "data.json", data))
        np.testing.assert_array_equal(back.hidden_map, data.hidden_map)


class TestLinearModel:
    def test_scalar_example(self):
        one = Dataset(inputs=np.array([[1.0]]), targets=np.array([[0.0]]))
        model = LinearModel(w=np.array([[2.0]]))
        assert square_loss(model, one) == 2.0
        np.testing.assert_array_equal(square_loss_grad(model, one), [[2.0]])

    def test_hidden_map_interpolates_clean_data(self):
        clean = make_dataset(d_in=5, d_out=2, n=30, seed=4)
        assert square_loss(LinearModel(w=clean.hidden_map), clean) == pytest.approx(0.0, abs=1e-28)

    def test_gradient_matches_finite_differences(self, data, rng):
        w = rng.standard_normal((3, 6))
        analytic = square_loss_grad(LinearModel(w=w), data)
        numeric = central_difference(lambda v: square_loss(LinearModel(w=v), data), w)
        assert relative_error(analytic, numeric) < 1e-6

    def test_shape_mismatch(self, data):
        with pytest.raises(ShapeError):
            square_loss(LinearModel(w=np.zeros((6, 3))), data)

    def test_sharpness(self, data):
        assert spectral_sharpness(data) == 2.0

    def test_majorization_holds(self, data, rng):
        model = LinearModel(w=rng.standard_normal((3, 6)))
        for scale in (1e-3, 1.0, 100.0):
            assert majorization_gap(model, scale * rng.standard_normal((3, 6)), data) >= -1e-10

    def test_majorization_is_tight_at_zero(self, data, rng):
        model = LinearModel(w=rng.standard_normal((3, 6)))
        assert majorization_gap(model, np.zeros((3, 6)), data) == 0.0


class TestTwoLayer:
    @pytest.fixture
    def net(self, rng):
        return TwoLayerNet(w1=rng.standard_normal((8, 6)), w2=rng.standard_normal((3, 8)))

    def test_zero_output_layer_blocks_the_first_gradient(self, data, rng):
        net = TwoLayerNet(w1=rng.standard_normal((8, 6)), w2=np.zeros((3, 8)))
        _, (g1, _) = two_layer_forward_backward(net, data)
        assert not np.any(g1)

    def test_gradients_match_finite_differences(self, data, net):
        _, (g1, g2) = two_layer_forward_backward(net, data)

        def loss_w1(v):
            return two_layer_forward_backward(TwoLayerNet(w1=v, w2=net.w2), data)[0]

        def loss_w2(v):
            return two_layer_forward_backward(TwoLayerNet(w1=net.w1, w2=v), data)[0]

        assert relative_error(g1, central_difference(loss_w1, net.w1)) < 1e-5
        assert relative_error(g2, central_difference(loss_w2, net.w2)) < 1e-5

    def test_layers(self, net):
        assert [w.shape for w in net.layers] == [(8, 6), (3, 8)]

    def test_shapes_must_chain(self, data, rng):
        net = TwoLayerNet(w1=rng.standard_normal((8, 5)), w2=rng.standard_normal((3, 8)))
        with pytest.raises(ShapeError):
            two_layer_forward_backward(net, data)
