import math

import numpy as np
import pytest

from conftest import random_ids
from src.core.errors import EmptySequence, IdOutOfRange
from src.core.vocab import BOS_ID, EOS_ID
from src.model.network import (
    attend,
    decode_step,
    encode,
    initial_state,
    project_keys,
    sequence_loss,
    sigmoid,
)
from src.model.params import ModelConfig, ModelParams, parameter_shapes


class TestParams:
    def test_initialize_is_seeded(self, tiny_config):
        a = ModelParams.initialize(tiny_config, 6, seed=3)
        b = ModelParams.initialize(tiny_config, 6, seed=3)
        for name, tensor in a.items():
            np.testing.assert_array_equal(tensor, b[name])

    def test_shapes_follow_config(self, tiny_params, tiny_config):
        for name, shape in parameter_shapes(tiny_config, 6).items():
            assert tiny_params[name].shape == shape
        assert tiny_params["dec_0_W"].shape == (15, 4 + 10)
        assert tiny_params["out_W"].shape == (6, 15)

    def test_init_scale_bounds(self, tiny_params):
        assert all(np.all(np.abs(t) <= 0.3) for _, t in tiny_params.items())


class TestEncoder:
    def test_output_shape(self, tiny_params):
        states = encode(tiny_params, [4, 5, 4, EOS_ID])
        assert states.shape == (4, 10)

    def test_two_encoder_layers(self):
        config = ModelConfig(embed_dim=3, hidden_dim=4, encoder_layers=2, decoder_layers=1)
        params = ModelParams.initialize(config, 6, seed=1)
        assert encode(params, [4, 5, EOS_ID]).shape == (3, 8)

    def test_zero_parameters_give_zero_states(self, tiny_config):
        params = ModelParams.zeros(tiny_config, 6)
        states = encode(params, [4, 5, 4, EOS_ID])
        np.testing.assert_array_equal(states, np.zeros((4, 10)))

    def test_reversed_input_swaps_directions(self, tiny_params):
        params = tiny_params.copy()
        for part in ("W", "U", "b"):
            params[f"enc_bwd_0_{part}"] = params[f"enc_fwd_0_{part}"].copy()
        ids = [4, 5, 5, 4, EOS_ID]
        states = encode(params, ids)
        flipped = encode(params, ids[::-1])
        H = params.config.hidden_dim
        np.testing.assert_allclose(flipped[:, :H], states[::-1, H:], atol=1e-12)
        np.testing.assert_allclose(flipped[:, H:], states[::-1, :H], atol=1e-12)

    def test_empty_source(self, tiny_params):
        with pytest.raises(EmptySequence):
            encode(tiny_params, [])

    def test_id_out_of_range(self, tiny_params):
        with pytest.raises(IdOutOfRange):
            encode(tiny_params, [4, 6])
        with pytest.raises(IdOutOfRange):
            encode(tiny_params, [-1])


class TestAttention:
    def test_weights_are_a_distribution(self, tiny_params):
        rng = np.random.default_rng(0)
        for _ in range(20):
            states = encode(tiny_params, random_ids(rng, int(rng.integers(1, 8))))
            query = rng.normal(size=5)
            context, weights = attend(tiny_params, query, states)
            assert abs(weights.sum() - 1.0) <= 1e-9
            assert np.all((weights >= 0) & (weights <= 1))
            np.testing.assert_allclose(context, weights @ states, atol=1e-12)

    def test_single_position(self, tiny_params):
        states = encode(tiny_params, [EOS_ID])
        context, weights = attend(tiny_params, np.full(5, 0.4), states)
        np.testing.assert_array_equal(weights, [1.0])
        np.testing.assert_allclose(context, states[0], atol=1e-12)

    def test_zero_scoring_vector_is_uniform(self, tiny_params):
        params = tiny_params.copy()
        params["att_v"] = np.zeros_like(params["att_v"])
        states = encode(params, [4, 5, 4, 5, EOS_ID])
        context, weights = attend(params, np.full(5, -0.2), states)
        np.testing.assert_allclose(weights, np.full(5, 0.2), atol=1e-12)
        np.testing.assert_allclose(context, states.mean(axis=0), atol=1e-12)

    def test_context_within_state_range(self, tiny_params):
        rng = np.random.default_rng(5)
        for _ in range(20):
            states = encode(tiny_params, random_ids(rng, int(rng.integers(1, 9))))
            context, _ = attend(tiny_params, rng.normal(size=5), states)
            assert np.all(context >= states.min(axis=0) - 1e-12)
            assert np.all(context <= states.max(axis=0) + 1e-12)

    def test_precomputed_keys_match(self, tiny_params):
        states = encode(tiny_params, [4, 5, EOS_ID])
        query = np.full(5, 0.1)
        a, _ = attend(tiny_params, query, states)
        b, _ = attend(tiny_params, query, states, project_keys(tiny_params, states))
        np.testing.assert_array_equal(a, b)


class TestDecodeStep:
    def test_log_probabilities_normalize(self, tiny_params):
        rng = np.random.default_rng(1)
        states = encode(tiny_params, random_ids(rng, 5))
        state = initial_state(tiny_params, states)
        prev = BOS_ID
        for _ in range(6):
            logp, state = decode_step(tiny_params, prev, state, states)
            assert logp.shape == (6,)
            assert abs(np.exp(logp).sum() - 1.0) <= 1e-9
            prev = int(np.argmax(logp))

    def test_state_has_one_vector_per_layer(self, tiny_params):
        states = encode(tiny_params, [4, EOS_ID])
        state = initial_state(tiny_params, states)
        assert len(state) == 2
        _, new_state = decode_step(tiny_params, BOS_ID, state, states)
        assert [s.shape for s in new_state] == [(5,), (5,)]

    def test_hand_computed_two_symbol_step(self):
        config = ModelConfig(embed_dim=1, hidden_dim=1, encoder_layers=1, decoder_layers=1)
        params = ModelParams.zeros(config, 2)
        params["enc_fwd_0_b"] = np.array([0.0, 0.0, 1.0])
        params["out_W"] = np.array([[0.0, 2.0, 0.0], [0.0, -1.0, 0.0]])
        params["out_b"] = np.array([0.1, 0.3])

        states = encode(params, [1])
        k = 0.5 * math.tanh(1.0)
        np.testing.assert_allclose(states, [[k, 0.0]], atol=1e-12)

        logp, new_state = decode_step(params, BOS_ID, initial_state(params, states), states)
        logits = [2 * k + 0.1, -k + 0.3]
        norm = math.log(sum(math.exp(v) for v in logits))
        np.testing.assert_allclose(logp, [v - norm for v in logits], atol=1e-12)
        np.testing.assert_allclose(new_state[0], [0.0], atol=1e-12)

    def test_deterministic(self, tiny_params):
        states = encode(tiny_params, [4, 5, EOS_ID])
        state = initial_state(tiny_params, states)
        first = decode_step(tiny_params, 4, state, states)
        second = decode_step(tiny_params, 4, state, states)
        np.testing.assert_array_equal(first[0], second[0])
        for a, b in zip(first[1], second[1]):
            np.testing.assert_array_equal(a, b)

    def test_bad_previous_id(self, tiny_params):
        states = encode(tiny_params, [4, EOS_ID])
        with pytest.raises(IdOutOfRange):
            decode_step(tiny_params, 9, initial_state(tiny_params, states), states)


class TestSequenceLoss:
    def test_empty_target(self, tiny_params):
        with pytest.raises(EmptySequence):
            sequence_loss(tiny_params, [4, EOS_ID], [])

    def test_loss_is_positive_and_counted(self, tiny_params):
        result = sequence_loss(tiny_params, [4, 5, EOS_ID], [5, 4, EOS_ID])
        assert result.loss > 0
        assert result.count == 3
        assert 0 <= result.correct <= 3

    def test_without_grads(self, tiny_params):
        with_grads = sequence_loss(tiny_params, [4, EOS_ID], [5, EOS_ID])
        without = sequence_loss(tiny_params, [4, EOS_ID], [5, EOS_ID], with_grads=False)
        assert without.grads is None
        assert without.loss == with_grads.loss


def test_sigmoid_is_stable_for_large_inputs():
    values = sigmoid(np.array([-800.0, 0.0, 800.0]))
    np.testing.assert_allclose(values, [0.0, 0.5, 1.0])
