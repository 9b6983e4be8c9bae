#!/usr/bin/env python
# coding: utf8
#
# Copyright (c) 2025 sentiforge contributors.
#
# This file is part of sentiforge.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
    This module stores trained models in the SFNN1 container.

    Layout: the magic bytes b"SFNN1", the manifest length as a little-endian uint32, the UTF-8 JSON manifest
    (model spec, seed, then one entry per parameter array: layer index, layer kind, name and shape) and
    finally every parameter as little-endian float64 values, row-major, in manifest order.
    A JSON sidecar <path>.json repeats the model spec for human readers.
"""
import json
import logging
import struct
import numpy as np
from sentiforge.neural.model import ModelSpec, SequenceModel
from sentiforge.utils.exceptions import ConfigError, DataError
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

MAGIC = b"SFNN1"
FORMAT_NAME = "SFNN1"
HEADER_LENGTH = struct.Struct("<I")
PAYLOAD_DTYPE = np.dtype("<f8")


def sidecar_path(path: str) -> str:
    return path + ".json"


def save_model(model: SequenceModel, path: str) -> None:
    manifest = {
        "format": FORMAT_NAME,
        "seed": model.seed,
        "spec": model.spec.to_dict(),
        "parameters": [{"layer": index, "kind": model.layers[index].KIND, "name": name, "shape": list(array.shape)}
                       for index, name, array in model.named_parameters()],
    }
    header = json.dumps(manifest, sort_keys=True).encode("utf-8")
    with open(path, "wb") as stream:
        stream.write(MAGIC)
        stream.write(HEADER_LENGTH.pack(len(header)))
        stream.write(header)
        for array in model.parameters():
            stream.write(np.ascontiguousarray(array, dtype=PAYLOAD_DTYPE).tobytes())
    with open(sidecar_path(path), "w", encoding="utf-8") as stream:
        json.dump({"format": FORMAT_NAME, "seed": model.seed, "spec": model.spec.to_dict()}, stream, indent=2)
        stream.write("\n")
    SentiforgeLogger.log("Model saved to {} ({} parameters)".format(path, model.parameter_count()), logging.DEBUG)


def load_model(path: str) -> SequenceModel:
    """
    Rebuild a model from an SFNN1 file.

    Args:
        path: model file.

    Returns:
        the model with its stored parameters.

    Raises:
        DataError: the file is not a consistent SFNN1 container.
    """
    with open(path, "rb") as stream:
        content = stream.read()
    if not content.startswith(MAGIC):
        raise DataError("'{}' is not an SFNN1 model file".format(path))
    offset = len(MAGIC)
    if len(content) < offset + HEADER_LENGTH.size:
        raise DataError("'{}' is truncated".format(path))
    (header_length,) = HEADER_LENGTH.unpack_from(content, offset)
    offset += HEADER_LENGTH.size
    try:
        manifest = json.loads(content[offset:offset + header_length].decode("utf-8"))
        spec = ModelSpec.from_dict(manifest["spec"])
        entries = manifest["parameters"]
    except (ValueError, KeyError, ConfigError) as err:
        raise DataError("'{}' has an invalid manifest: {}".format(path, err)) from err
    offset += header_length

    model = SequenceModel(spec, seed=manifest.get("seed", 42))
    named = model.named_parameters()
    if len(entries) != len(named):
        raise DataError("'{}' holds {} parameter array(s), the spec needs {}".format(path, len(entries), len(named)))
    if offset > len(content) or (len(content) - offset) % PAYLOAD_DTYPE.itemsize:
        raise DataError("'{}' has a truncated payload".format(path))
    payload = np.frombuffer(content, dtype=PAYLOAD_DTYPE, offset=offset)
    position = 0
    for entry, (index, name, array) in zip(entries, named):
        if entry.get("layer") != index or entry.get("name") != name or tuple(entry.get("shape", ())) != array.shape:
            raise DataError("'{}': manifest entry {} does not match layer {} parameter '{}' {}".format(
                path, entry, index, name, array.shape))
        size = array.size
        if position + size > payload.size:
            raise DataError("'{}' is truncated".format(path))
        array[...] = payload[position:position + size].reshape(array.shape)
        position += size
    if position != payload.size:
        raise DataError("'{}' has {} trailing value(s)".format(path, payload.size - position))
    return model
