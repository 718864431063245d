"""Small gated sequence tagger with a sentence-level multi-label head.

Architecture, for a tweet of ``n`` tokens::

    x_i  = mean of embed[b] over the hashed char-trigram buckets b of token i
    z_i  = [x_{i-w}, ..., x_{i+w}]            (zero rows beyond the edges)
    h_i  = tanh(enc_w @ z_i + enc_b)
    m    = mean_i h_i
    q_i  = softmax(tok_w @ h_i + tok_b)       21 classes, index 0 is O
    g    = sigmoid(gate_w . m + gate_b)
    p    = sigmoid(sent_w @ m + sent_b)       one probability per technique

The gate moves technique mass to O: the gated distribution is ``g * q_i(c)``
for every technique class and ``q_i(O) + (1 - g) * (1 - q_i(O))`` for O, so
it still sums to one.  All gradients are written out by hand.

Per-tweet loss: token cross-entropy of the gated distributions (summed over
tokens), binary cross-entropy of ``p`` against the tweet's techniques
(summed over the 20 techniques), and binary cross-entropy of ``g`` against
"tweet has at least one span".  Batches average the per-tweet losses.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .codec import TokenSpan, labels_of, spans_to_tags, tags_to_spans, tokenize
from .core import N_TECHNIQUES, LabelSet, Span, Technique, TweetAnnotation
from .errors import EmptyDataset, EmptyInput, LengthMismatch

logger = logging.getLogger(__name__)

N_CLASSES = N_TECHNIQUES + 1
O_CLASS = 0

PARAM_NAMES = ("embed", "enc_w", "enc_b", "tok_w", "tok_b", "sent_w", "sent_b", "gate_w", "gate_b")


@dataclass(frozen=True)
class Dims:
    vocab: int = 4096
    embed: int = 32
    hidden: int = 64
    window: int = 2

    def __post_init__(self):
        if min(self.vocab, self.embed, self.hidden) < 1 or self.window < 0:
            raise ValueError("invalid model dimensions: %r" % (self,))

    @property
    def context(self) -> int:
        return (2 * self.window + 1) * self.embed

    def shapes(self) -> dict:
        return {
            "embed": (self.vocab, self.embed),
            "enc_w": (self.hidden, self.context),
            "enc_b": (self.hidden,),
            "tok_w": (N_CLASSES, self.hidden),
            "tok_b": (N_CLASSES,),
            "sent_w": (N_TECHNIQUES, self.hidden),
            "sent_b": (N_TECHNIQUES,),
            "gate_w": (self.hidden,),
            "gate_b": (1,),
        }


@dataclass
class ModelParams:
    """All trainable arrays (float64).  Also used to hold gradients."""

    dims: Dims
    embed: np.ndarray
    enc_w: np.ndarray
    enc_b: np.ndarray
    tok_w: np.ndarray
    tok_b: np.ndarray
    sent_w: np.ndarray
    sent_b: np.ndarray
    gate_w: np.ndarray
    gate_b: np.ndarray

    def arrays(self) -> List[Tuple[str, np.ndarray]]:
        return [(name, getattr(self, name)) for name in PARAM_NAMES]

    def copy(self) -> "ModelParams":
        return replace(self, **{n: a.copy() for n, a in self.arrays()})

    def zeros_like(self) -> "ModelParams":
        return ModelParams.zeros(self.dims)

    @classmethod
    def zeros(cls, dims: Dims) -> "ModelParams":
        return cls(dims, **{n: np.zeros(s) for n, s in dims.shapes().items()})

    @property
    def size(self) -> int:
        return sum(a.size for _, a in self.arrays())

    def is_finite(self) -> bool:
        return all(np.isfinite(a).all() for _, a in self.arrays())

    def equals(self, other: "ModelParams") -> bool:
        """Bitwise equality of dims and every array."""
        return self.dims == other.dims and all(
            a.tobytes() == getattr(other, n).tobytes() for n, a in self.arrays()
        )


def init_params(dims: Dims, seed: int = 0) -> ModelParams:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) init; embedding rows use fan_in = 1."""
    rng = np.random.default_rng(seed)
    fan_in = {
        "embed": 1,
        "enc_w": dims.context,
        "enc_b": dims.context,
        "tok_w": dims.hidden,
        "tok_b": dims.hidden,
        "sent_w": dims.hidden,
        "sent_b": dims.hidden,
        "gate_w": dims.hidden,
        "gate_b": dims.hidden,
    }
    arrays = {}
    for name, shape in dims.shapes().items():
        bound = 1.0 / np.sqrt(fan_in[name])
        arrays[name] = rng.uniform(-bound, bound, size=shape)
    return ModelParams(dims, **arrays)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 50
    batch_size: int = 8
    seed: int = 0
    threshold: float = 0.5
    dims: Dims = field(default_factory=Dims)
    # token cross-entropy, sentence multi-label BCE, gate BCE
    loss_weights: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1), got %r" % self.threshold)
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")


@dataclass
class ForwardOutput:
    token_dist: np.ndarray  # (n, 21) gated
    gate: float
    multilabel_probs: np.ndarray  # (20,)
    ungated: np.ndarray  # (n, 21) plain softmax


def class_to_tag(k: int) -> Optional[Technique]:
    return None if k == O_CLASS else Technique.from_index(k - 1)


def tag_to_class(tag: Optional[Technique]) -> int:
    return O_CLASS if tag is None else tag.index + 1


# --------------------------------------------------------------------------
# numerics


def _sigmoid(x):
    return np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))), np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))


def _softplus(x):
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


# --------------------------------------------------------------------------
# forward


@dataclass
class _Features:
    n: int
    rows: np.ndarray  # token index of each trigram occurrence
    cols: np.ndarray  # embedding bucket of each occurrence
    weights: np.ndarray  # 1 / (#trigrams of that token)


def featurize(tokens: Sequence[TokenSpan], vocab: int) -> _Features:
    rows, cols, weights = [], [], []
    for i, tok in enumerate(tokens):
        buckets = _kernels.trigram_buckets(tok.surface, vocab)
        rows.extend([i] * len(buckets))
        cols.extend(buckets)
        weights.extend([1.0 / len(buckets)] * len(buckets))
    return _Features(
        len(tokens),
        np.asarray(rows, dtype=np.intp),
        np.asarray(cols, dtype=np.intp),
        np.asarray(weights, dtype=np.float64),
    )


@dataclass
class _Cache:
    feats: _Features
    z: np.ndarray
    h: np.ndarray
    m: np.ndarray
    logits: np.ndarray
    log_q: np.ndarray
    gate_logit: float
    sent_logits: np.ndarray


def _forward(feats: _Features, params: ModelParams) -> _Cache:
    dims = params.dims
    n, w, d = feats.n, dims.window, dims.embed
    if n == 0:
        raise EmptyInput("cannot run the tagger on an empty token list")
    x = np.zeros((n + 2 * w, d))
    np.add.at(x, feats.rows + w, feats.weights[:, None] * params.embed[feats.cols])
    z = np.concatenate([x[k:k + n] for k in range(2 * w + 1)], axis=1)
    h = np.tanh(z @ params.enc_w.T + params.enc_b)
    m = h.mean(axis=0)
    logits = h @ params.tok_w.T + params.tok_b
    gate_logit = float(params.gate_w @ m + params.gate_b[0])
    sent_logits = params.sent_w @ m + params.sent_b
    return _Cache(feats, z, h, m, logits, _log_softmax(logits), gate_logit, sent_logits)


def _gated(log_q: np.ndarray, gate_logit: float) -> np.ndarray:
    q = np.exp(log_q)
    g = float(_sigmoid(np.float64(gate_logit)))
    out = g * q
    # 1 - g * (1 - q_O), written as a sum of non-negative terms
    out[:, O_CLASS] = float(_sigmoid(np.float64(-gate_logit))) + g * q[:, O_CLASS]
    return out


def encode_tokens(tokens: Sequence[TokenSpan], params: ModelParams) -> np.ndarray:
    """Hidden vector per token, shape ``(n, hidden)``."""
    return _forward(featurize(tokens, params.dims.vocab), params).h


def forward(tokens: Sequence[TokenSpan], params: ModelParams) -> ForwardOutput:
    c = _forward(featurize(tokens, params.dims.vocab), params)
    return ForwardOutput(
        token_dist=_gated(c.log_q, c.gate_logit),
        gate=float(_sigmoid(np.float64(c.gate_logit))),
        multilabel_probs=_sigmoid(c.sent_logits),
        ungated=np.exp(c.log_q),
    )


def decide_labels(probs: Sequence[float], threshold: float = 0.5) -> LabelSet:
    """Techniques whose probability reaches the threshold (inclusive); empty means no technique."""
    if len(probs) != N_TECHNIQUES:
        raise LengthMismatch("expected %d probabilities, got %d" % (N_TECHNIQUES, len(probs)))
    return frozenset(Technique.from_index(i) for i, p in enumerate(probs) if p >= threshold)


def classify_multilabel(tokens: Sequence[TokenSpan], params: ModelParams, threshold: float = 0.5) -> LabelSet:
    return decide_labels(forward(tokens, params).multilabel_probs, threshold)


def decode_spans(tokens: Sequence[TokenSpan], token_dist: np.ndarray) -> List[Span]:
    """Per-token argmax (ties to the lowest class, O first), then run-merge into spans."""
    token_dist = np.asarray(token_dist)
    if token_dist.ndim != 2 or token_dist.shape[0] != len(tokens):
        raise LengthMismatch("%d tokens but distribution of shape %s" % (len(tokens), token_dist.shape))
    return tags_to_spans(tokens, [class_to_tag(int(k)) for k in token_dist.argmax(axis=1)])


def predict_annotation(
    ann: TweetAnnotation,
    params: ModelParams,
    threshold: float = 0.5,
    tokenizer: Callable[[str], List[TokenSpan]] = tokenize,
) -> TweetAnnotation:
    """Both subtask outputs for one tweet: decoded spans plus the thresholded label set."""
    tokens = tokenizer(ann.text)
    if not tokens:
        return TweetAnnotation(ann.id, ann.text, (), frozenset())
    out = forward(tokens, params)
    return TweetAnnotation(
        ann.id,
        ann.text,
        tuple(decode_spans(tokens, out.token_dist)),
        decide_labels(out.multilabel_probs, threshold),
    )


# --------------------------------------------------------------------------
# loss and gradient


@dataclass
class _Example:
    feats: _Features
    targets: np.ndarray  # class index per token
    label_vec: np.ndarray  # (20,) 0/1
    has_propaganda: float


def prepare(ann: TweetAnnotation, vocab: int, tokenizer=tokenize) -> _Example:
    tokens = tokenizer(ann.text)
    if not tokens:
        raise EmptyInput("annotation %r has no tokens" % ann.id)
    targets = np.array([tag_to_class(t) for t in spans_to_tags(ann, tokens)], dtype=np.intp)
    label_vec = np.zeros(N_TECHNIQUES)
    for t in labels_of(ann):
        label_vec[t.index] = 1.0
    return _Example(featurize(tokens, vocab), targets, label_vec, 1.0 if ann.spans else 0.0)


def _example_loss(ex: _Example, c: _Cache, weights) -> float:
    w_tok, w_sent, w_gate = weights
    a = c.gate_logit
    log_g = -float(_softplus(np.float64(-a)))
    g = float(_sigmoid(np.float64(a)))
    one_minus_g = float(_sigmoid(np.float64(-a)))
    n = ex.feats.n
    idx = np.arange(n)
    log_q_y = c.log_q[idx, ex.targets]
    is_o = ex.targets == O_CLASS
    q_o = np.exp(c.log_q[:, O_CLASS])
    log_p = np.where(is_o, np.log(one_minus_g + g * q_o), log_g + log_q_y)
    token_ce = -log_p.sum()
    u = c.sent_logits
    sent_bce = (_softplus(u) - ex.label_vec * u).sum()
    gate_bce = float(_softplus(np.float64(a))) - ex.has_propaganda * a
    return w_tok * token_ce + w_sent * sent_bce + w_gate * gate_bce


def _example_backward(ex: _Example, c: _Cache, params: ModelParams, grads: ModelParams, scale: float, weights):
    """Accumulate ``scale * d(loss)/d(params)`` into ``grads``."""
    w_tok, w_sent, w_gate = weights
    dims = params.dims
    n, w, d = ex.feats.n, dims.window, dims.embed
    a = c.gate_logit
    g = float(_sigmoid(np.float64(a)))
    one_minus_g = float(_sigmoid(np.float64(-a)))
    q = np.exp(c.log_q)
    q_o = q[:, O_CLASS]
    is_o = ex.targets == O_CLASS

    # token cross-entropy
    d_logits = np.empty_like(q)
    d_gate = 0.0
    tech = ~is_o
    if tech.any():
        d_logits[tech] = q[tech]
        d_logits[tech, ex.targets[tech]] -= 1.0
        d_gate += -one_minus_g * tech.sum()
    if is_o.any():
        denom = one_minus_g + g * q_o[is_o]
        coef = (g * q_o[is_o] / denom)[:, None]
        onehot_o = np.zeros(N_CLASSES)
        onehot_o[O_CLASS] = 1.0
        d_logits[is_o] = -coef * (onehot_o - q[is_o])
        d_gate += float(((1.0 - q_o[is_o]) * g * one_minus_g / denom).sum())
    d_logits *= w_tok
    d_gate *= w_tok

    # gate BCE
    d_gate += w_gate * (g - ex.has_propaganda)
    # sentence multi-label BCE
    d_sent = w_sent * (_sigmoid(c.sent_logits) - ex.label_vec)

    d_gate *= scale
    d_sent = d_sent * scale
    d_logits *= scale

    grads.gate_w += d_gate * c.m
    grads.gate_b[0] += d_gate
    grads.sent_w += np.outer(d_sent, c.m)
    grads.sent_b += d_sent
    d_m = d_gate * params.gate_w + params.sent_w.T @ d_sent

    grads.tok_w += d_logits.T @ c.h
    grads.tok_b += d_logits.sum(axis=0)
    d_h = d_logits @ params.tok_w + d_m / n

    d_pre = d_h * (1.0 - c.h * c.h)
    grads.enc_w += d_pre.T @ c.z
    grads.enc_b += d_pre.sum(axis=0)
    d_z = d_pre @ params.enc_w

    d_x = np.zeros((n + 2 * w, d))
    for k in range(2 * w + 1):
        d_x[k:k + n] += d_z[:, k * d:(k + 1) * d]
    f = ex.feats
    np.add.at(grads.embed, f.cols, f.weights[:, None] * d_x[f.rows + w])


def loss(example: TweetAnnotation, params: ModelParams, loss_weights=(1.0, 1.0, 1.0), tokenizer=tokenize) -> float:
    """Loss of one annotated tweet; see the module docstring for the terms."""
    ex = prepare(example, params.dims.vocab, tokenizer)
    return _example_loss(ex, _forward(ex.feats, params), loss_weights)


def _batch_loss(batch: Sequence[_Example], params: ModelParams, weights) -> float:
    return sum(_example_loss(ex, _forward(ex.feats, params), weights) for ex in batch) / len(batch)


def _batch_grad(batch: Sequence[_Example], params: ModelParams, weights) -> ModelParams:
    grads = params.zeros_like()
    scale = 1.0 / len(batch)
    for ex in batch:
        _example_backward(ex, _forward(ex.feats, params), params, grads, scale, weights)
    return grads


def grad(batch: Sequence[TweetAnnotation], params: ModelParams, loss_weights=(1.0, 1.0, 1.0), tokenizer=tokenize) -> ModelParams:
    """Analytic gradient of the mean batch loss, same layout as ``params``."""
    if not batch:
        raise EmptyInput("empty batch")
    prepared = [prepare(a, params.dims.vocab, tokenizer) for a in batch]
    return _batch_grad(prepared, params, loss_weights)


def grad_check(example: TweetAnnotation, params: ModelParams, epsilon: float = 1e-4, loss_weights=(1.0, 1.0, 1.0)) -> float:
    """Max relative error between the analytic gradient and central differences.

    Relative error per coordinate is ``|a - n| / max(|a|, |n|, 1e-8)``.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    ex = prepare(example, params.dims.vocab)
    analytic = _batch_grad([ex], params, loss_weights)
    probe = params.copy()
    worst = 0.0
    for name, arr in probe.arrays():
        flat = arr.reshape(-1)
        ga = getattr(analytic, name).reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            up = _batch_loss([ex], probe, loss_weights)
            flat[i] = orig - epsilon
            down = _batch_loss([ex], probe, loss_weights)
            flat[i] = orig
            num = (up - down) / (2 * epsilon)
            err = abs(ga[i] - num) / max(abs(ga[i]), abs(num), 1e-8)
            worst = max(worst, err)
    return worst


# --------------------------------------------------------------------------
# training


@dataclass
class TrainResult:
    params: ModelParams
    losses: List[float]  # mean training loss after each epoch


def train(
    dataset: Sequence[TweetAnnotation],
    config: TrainConfig = TrainConfig(),
    initial: Optional[ModelParams] = None,
    tokenizer=tokenize,
) -> TrainResult:
    """Mini-batch gradient descent; continues from ``initial`` when given.

    Shuffle order and initialization both come from ``config.seed``, so
    identical inputs give bit-identical parameters.
    """
    if not dataset:
        raise EmptyDataset("cannot train on an empty dataset")
    params = initial.copy() if initial is not None else init_params(config.dims, config.seed)
    examples = [prepare(a, params.dims.vocab, tokenizer) for a in dataset]
    rng = np.random.default_rng([config.seed, 1])
    weights = config.loss_weights
    losses: List[float] = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(examples))
        for lo in range(0, len(order), config.batch_size):
            batch = [examples[i] for i in order[lo:lo + config.batch_size]]
            grads = _batch_grad(batch, params, weights)
            for name, arr in params.arrays():
                arr -= config.learning_rate * getattr(grads, name)
        losses.append(_batch_loss(examples, params, weights))
        logger.debug("epoch %d loss %.6f", epoch + 1, losses[-1])
    return TrainResult(params, losses)
