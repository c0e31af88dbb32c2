import struct

import pytest

from binclass import modelio
from binclass.bitcore import BitMatrix
from binclass.dataset import Preprocessor
from binclass.hashfn import Model

from conftest import random_signs


@pytest.fixture
def model(rng):
    d, r, C = 5, 70, 3
    return Model(
        rng.normal(size=(d, r)),
        BitMatrix.from_signs(random_signs(rng, C, r)),
        Preprocessor(rng.normal(size=d), rng.uniform(0.5, 2, size=d)),
        loss="hinge",
    )


def test_roundtrip_bit_exact(model, tmp_path):
    path = tmp_path / "m.bcls"
    modelio.save(model, path)
    back = modelio.load(path)
    assert back.P.tobytes() == model.P.tobytes()
    assert back.W == model.W
    assert back.preprocessor.mean.tobytes() == model.preprocessor.mean.tobytes()
    assert back.preprocessor.scale.tobytes() == model.preprocessor.scale.tobytes()
    assert back.loss == "hinge"
    assert modelio.dumps(back) == path.read_bytes()


def test_layout(model):
    data = modelio.dumps(model)
    magic, version, tag, d, r, C = struct.unpack_from("<4s5I", data)
    assert (magic, version, tag, d, r, C) == (b"BCLS", 1, 1, 5, 70, 3)
    w_bytes = C * ((r + 63) // 64) * 8
    assert len(data) == 24 + 8 * (2 * d + d * r) + w_bytes
    assert data[-w_bytes:] == model.W.words.astype("<u8").tobytes()
    first_word = int.from_bytes(data[-w_bytes:-w_bytes + 8], "little")
    assert first_word & 1 == (model.W.to_signs()[0, 0] > 0)


def test_rejects_bad_files(model):
    data = modelio.dumps(model)
    with pytest.raises(modelio.ModelFormatError):
        modelio.loads(b"XXXX" + data[4:])
    with pytest.raises(modelio.ModelFormatError):
        modelio.loads(data[:-1])
    with pytest.raises(modelio.ModelFormatError):
        modelio.loads(data[:4] + struct.pack("<I", 99) + data[8:])
    bad_pad = bytearray(data)
    bad_pad[-1] = 0xFF  # sets pad bits of the last row
    with pytest.raises(ValueError):
        modelio.loads(bytes(bad_pad))
