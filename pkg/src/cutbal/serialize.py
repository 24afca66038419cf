"""Versioned binary layout for sketches, plus a JSON mirror.

Vertex ids are bit-packed at ceil(log2 n) bits.  Weights inside a dyadic
class [2^(i-1), 2^i) whose members are all integers are stored as (i-1)-bit
offsets, which is lossless; otherwise raw float64 is used.  Sizes reported
by the ``*_size_bits`` helpers count exactly the bits written.
"""

import json
import math
import struct

import numpy as np

MAGIC_FOREACH = 0x43425331  # "CBS1"
MAGIC_FAST = 0x43424631     # "CBF1"
VERSION = 1


class BitWriter:
    def __init__(self):
        self._buf = bytearray()
        self._cur = 0
        self._fill = 0
        self.bits_written = 0

    def write(self, value, width):
        value = int(value)
        if width < 0 or (width < 64 and value >> width):
            raise ValueError(f"value {value} does not fit in {width} bits")
        self.bits_written += width
        while width > 0:
            take = min(8 - self._fill, width)
            chunk = (value >> (width - take)) & ((1 << take) - 1)
            self._cur = (self._cur << take) | chunk
            self._fill += take
            width -= take
            if self._fill == 8:
                self._buf.append(self._cur)
                self._cur = 0
                self._fill = 0

    def write_f64(self, value):
        (as_int,) = struct.unpack(">Q", struct.pack(">d", float(value)))
        self.write(as_int, 64)

    def getvalue(self):
        out = bytes(self._buf)
        if self._fill:
            out += bytes([self._cur << (8 - self._fill)])
        return out


class BitReader:
    def __init__(self, data):
        self._data = data
        self._pos = 0

    def read(self, width):
        value = 0
        pos = self._pos
        for _ in range(width):
            byte = self._data[pos >> 3]
            bit = (byte >> (7 - (pos & 7))) & 1
            value = (value << 1) | bit
            pos += 1
        self._pos = pos
        return value

    def read_f64(self):
        (value,) = struct.unpack(">d", struct.pack(">Q", self.read(64)))
        return value


def _id_width(n):
    return max(1, (max(n, 2) - 1).bit_length())


def _class_weight_mode(index, weights):
    """1 when every weight is an integer representable as an offset."""
    if index > 53:
        return 0
    for w in weights:
        if w != math.floor(w):
            return 0
    return 1


def _write_weight(bw, mode, index, w):
    if mode:
        bw.write(int(w) - (1 << (index - 1)), index - 1)
    else:
        bw.write_f64(w)


def _read_weight(br, mode, index):
    if mode:
        return float(br.read(index - 1) + (1 << (index - 1)))
    return br.read_f64()


def _deg_width(values):
    peak = 0
    for v in values:
        peak = max(peak, int(v))
    return max(1, peak.bit_length())


def _write_component(bw, idw, degw, wmode, index, ceil_alpha, comp):
    bw.write(comp.members.shape[0], 32)
    for v in comp.members:
        bw.write(int(v), idw)
    for do, di in zip(comp.deg_out, comp.deg_in):
        bw.write(int(do), degw)
        bw.write(int(di), degw)
    for i in range(comp.members.shape[0]):
        for rec in (comp.samples_out[i], comp.samples_in[i]):
            if rec is None:
                continue
            ends, ws = rec
            for q in range(ceil_alpha):
                bw.write(int(ends[q]), idw)
                _write_weight(bw, wmode, index, float(ws[q]))


def _read_component(br, idw, degw, wmode, index, ceil_alpha):
    from .foreach import ComponentSketch

    size = br.read(32)
    members = np.array([br.read(idw) for _ in range(size)], dtype=np.int64)
    deg_out = np.zeros(size, dtype=np.int64)
    deg_in = np.zeros(size, dtype=np.int64)
    for i in range(size):
        deg_out[i] = br.read(degw)
        deg_in[i] = br.read(degw)
    samples_out = []
    samples_in = []
    for i in range(size):
        for deg, bucket in ((deg_out[i], samples_out), (deg_in[i], samples_in)):
            if deg == 0:
                bucket.append(None)
                continue
            ends = np.zeros(ceil_alpha, dtype=np.int64)
            ws = np.zeros(ceil_alpha)
            for q in range(ceil_alpha):
                ends[q] = br.read(idw)
                ws[q] = _read_weight(br, wmode, index)
            bucket.append((ends, ws))
    return ComponentSketch(members=members, deg_out=deg_out, deg_in=deg_in,
                           samples_out=samples_out, samples_in=samples_in)


def _write_edges(bw, idw, wmode, index, tails, heads, weights):
    bw.write(tails.shape[0], 32)
    for t, h, w in zip(tails, heads, weights):
        bw.write(int(t), idw)
        bw.write(int(h), idw)
        _write_weight(bw, wmode, index, float(w))


def _read_edges(br, idw, wmode, index):
    count = br.read(32)
    tails = np.zeros(count, dtype=np.int64)
    heads = np.zeros(count, dtype=np.int64)
    weights = np.zeros(count)
    for e in range(count):
        tails[e] = br.read(idw)
        heads[e] = br.read(idw)
        weights[e] = _read_weight(br, wmode, index)
    return tails, heads, weights


def _header(bw, magic, sk, flags):
    bw.write(magic, 32)
    bw.write(VERSION, 8)
    bw.write(flags, 8)
    bw.write(sk.n, 32)
    bw.write(sk.seed, 64)
    bw.write_f64(sk.beta)
    bw.write_f64(sk.eps)
    bw.write_f64(sk.alpha)
    bw.write(sk.ceil_alpha, 32)


def _foreach_writer(sk):
    bw = BitWriter()
    flags = 1 if sk.mode == "exact" else 0
    _header(bw, MAGIC_FOREACH, sk, flags)
    bw.write_f64(sk.lam)
    bw.write(len(sk.classes), 16)
    idw = _id_width(sk.n)
    for cls in sk.classes:
        bw.write(cls.index, 8)
        all_weights = list(cls.sparse_weights)
        degs = []
        for comp in cls.components:
            degs.extend(int(d) for d in comp.deg_out)
            degs.extend(int(d) for d in comp.deg_in)
            for rec in comp.samples_out + comp.samples_in:
                if rec is not None:
                    all_weights.extend(rec[1])
        wmode = _class_weight_mode(cls.index, all_weights)
        degw = _deg_width(degs)
        bw.write(wmode, 1)
        bw.write(degw, 6)
        _write_edges(bw, idw, wmode, cls.index, cls.sparse_tails,
                     cls.sparse_heads, cls.sparse_weights)
        bw.write(len(cls.components), 32)
        for comp in cls.components:
            _write_component(bw, idw, degw, wmode, cls.index, sk.ceil_alpha, comp)
    return bw


def serialize_foreach(sk):
    return _foreach_writer(sk).getvalue()


def foreach_size_bits(sk):
    return _foreach_writer(sk).bits_written


def deserialize_foreach(data):
    from .foreach import ClassSketch, ForEachSketch

    br = BitReader(data)
    if br.read(32) != MAGIC_FOREACH:
        raise ValueError("not a peeling-sketch stream")
    if br.read(8) != VERSION:
        raise ValueError("unsupported sketch version")
    flags = br.read(8)
    n = br.read(32)
    seed = br.read(64)
    beta = br.read_f64()
    eps = br.read_f64()
    alpha = br.read_f64()
    ceil_alpha = br.read(32)
    lam = br.read_f64()
    n_classes = br.read(16)
    idw = _id_width(n)
    classes = []
    for _ in range(n_classes):
        index = br.read(8)
        wmode = br.read(1)
        degw = br.read(6)
        st, sh, sw = _read_edges(br, idw, wmode, index)
        n_comps = br.read(32)
        comps = [_read_component(br, idw, degw, wmode, index, ceil_alpha)
                 for _ in range(n_comps)]
        classes.append(ClassSketch(index=index, sparse_tails=st, sparse_heads=sh,
                                   sparse_weights=sw, components=comps))
    return ForEachSketch(n=n, beta=beta, eps=eps, alpha=alpha, lam=lam,
                         ceil_alpha=ceil_alpha, seed=seed,
                         mode="exact" if flags & 1 else "heuristic",
                         classes=classes)


def _fast_writer(sk):
    bw = BitWriter()
    _header(bw, MAGIC_FAST, sk, 0)
    bw.write(len(sk.classes), 16)
    idw = _id_width(sk.n)
    for cls in sk.classes:
        bw.write(cls.index, 8)
        all_weights = []
        degs = []
        for lvl in cls.levels:
            all_weights.extend(lvl.low_degree_weights)
            for part in lvl.parts:
                degs.extend(int(d) for d in part.deg_out)
                degs.extend(int(d) for d in part.deg_in)
                for rec in part.samples_out + part.samples_in:
                    if rec is not None:
                        all_weights.extend(rec[1])
        wmode = _class_weight_mode(cls.index, all_weights)
        degw = _deg_width(degs)
        bw.write(wmode, 1)
        bw.write(degw, 6)
        bw.write(len(cls.levels), 16)
        for lvl in cls.levels:
            bw.write_f64(lvl.phi_star)
            bw.write(lvl.edges_total, 32)
            bw.write(lvl.edges_retained, 32)
            _write_edges(bw, idw, wmode, cls.index, lvl.low_degree_tails,
                         lvl.low_degree_heads, lvl.low_degree_weights)
            bw.write(len(lvl.parts), 32)
            for part in lvl.parts:
                _write_component(bw, idw, degw, wmode, cls.index,
                                 sk.ceil_alpha, part)
    return bw


def serialize_fast(sk):
    return _fast_writer(sk).getvalue()


def fast_size_bits(sk):
    return _fast_writer(sk).bits_written


def deserialize_fast(data):
    from .fast import FastClassSketch, FastLevelSketch, FastSketch

    br = BitReader(data)
    if br.read(32) != MAGIC_FAST:
        raise ValueError("not an expander-sketch stream")
    if br.read(8) != VERSION:
        raise ValueError("unsupported sketch version")
    br.read(8)
    n = br.read(32)
    seed = br.read(64)
    beta = br.read_f64()
    eps = br.read_f64()
    alpha = br.read_f64()
    ceil_alpha = br.read(32)
    n_classes = br.read(16)
    idw = _id_width(n)
    classes = []
    for _ in range(n_classes):
        index = br.read(8)
        wmode = br.read(1)
        degw = br.read(6)
        n_levels = br.read(16)
        levels = []
        for _ in range(n_levels):
            phi_star = br.read_f64()
            edges_total = br.read(32)
            edges_retained = br.read(32)
            lt, lh, lw = _read_edges(br, idw, wmode, index)
            n_parts = br.read(32)
            parts = [_read_component(br, idw, degw, wmode, index, ceil_alpha)
                     for _ in range(n_parts)]
            levels.append(FastLevelSketch(phi_star=phi_star, edges_total=edges_total,
                                          edges_retained=edges_retained,
                                          low_degree_tails=lt, low_degree_heads=lh,
                                          low_degree_weights=lw, parts=parts))
        classes.append(FastClassSketch(index=index, levels=levels))
    return FastSketch(n=n, beta=beta, eps=eps, alpha=alpha, ceil_alpha=ceil_alpha,
                      seed=seed, classes=classes)


def detect_kind(data):
    magic = BitReader(data).read(32)
    if magic == MAGIC_FOREACH:
        return "foreach"
    if magic == MAGIC_FAST:
        return "fast"
    raise ValueError("unknown sketch stream")


def _samples_json(rec):
    if rec is None:
        return None
    ends, ws = rec
    return {"endpoints": [int(v) for v in ends], "weights": [float(w) for w in ws]}


def _component_json(comp):
    return {
        "members": [int(v) for v in comp.members],
        "deg_out": [int(d) for d in comp.deg_out],
        "deg_in": [int(d) for d in comp.deg_in],
        "samples_out": [_samples_json(r) for r in comp.samples_out],
        "samples_in": [_samples_json(r) for r in comp.samples_in],
    }


def _edges_json(tails, heads, weights):
    return [[int(t), int(h), float(w)] for t, h, w in zip(tails, heads, weights)]


def foreach_json(sk):
    """JSON debug dump mirroring the binary content."""
    return json.dumps({
        "kind": "foreach",
        "version": VERSION,
        "n": sk.n,
        "beta": sk.beta,
        "eps": sk.eps,
        "alpha": sk.alpha,
        "lambda": sk.lam,
        "ceil_alpha": sk.ceil_alpha,
        "seed": sk.seed,
        "mode": sk.mode,
        "classes": [{
            "index": cls.index,
            "sparse_edges": _edges_json(cls.sparse_tails, cls.sparse_heads,
                                        cls.sparse_weights),
            "components": [_component_json(c) for c in cls.components],
        } for cls in sk.classes],
    }, sort_keys=True)


def fast_json(sk):
    return json.dumps({
        "kind": "fast",
        "version": VERSION,
        "n": sk.n,
        "beta": sk.beta,
        "eps": sk.eps,
        "alpha": sk.alpha,
        "ceil_alpha": sk.ceil_alpha,
        "seed": sk.seed,
        "classes": [{
            "index": cls.index,
            "levels": [{
                "phi_star": lvl.phi_star,
                "edges_total": lvl.edges_total,
                "edges_retained": lvl.edges_retained,
                "low_degree_edges": _edges_json(lvl.low_degree_tails,
                                                lvl.low_degree_heads,
                                                lvl.low_degree_weights),
                "parts": [_component_json(p) for p in lvl.parts],
            } for lvl in cls.levels],
        } for cls in sk.classes],
    }, sort_keys=True)
