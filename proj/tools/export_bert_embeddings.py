#!/usr/bin/env python3
# Copyright (c) 2026 The svs Authors
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
"""Exports contextual token vectors of every lyric in a transcription file.

The output is the JSONL read by the "precomputed" semantic provider:
  {"text": ..., "token_to_char": [...], "vectors": [[...], ...]}
token_to_char maps each token to its character index (-1 for special
tokens); the C++ side averages tokens back to one vector per character.
"""

import argparse
import json

import torch
from transformers import AutoModel, AutoTokenizer


def lyrics(path):
    seen = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            fields = line.rstrip("\n").split("|")
            if len(fields) < 2 or fields[1] in seen:
                continue
            seen.add(fields[1])
            yield fields[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("transcriptions")
    ap.add_argument("out")
    ap.add_argument("--model", default="bert-base-chinese")
    args = ap.parse_args()

    tok = AutoTokenizer.from_pretrained(args.model)
    model = AutoModel.from_pretrained(args.model).eval()
    with open(args.out, "w", encoding="utf-8") as out, torch.no_grad():
        for text in lyrics(args.transcriptions):
            enc = tok(text, return_offsets_mapping=True, return_tensors="pt")
            offsets = enc.pop("offset_mapping")[0].tolist()
            hidden = model(**enc).last_hidden_state[0]
            # Offsets are code point positions in the Python string, which is
            # one position per lyric character.
            align = [-1 if e <= s else s for s, e in offsets]
            out.write(json.dumps({
                "text": text,
                "token_to_char": align,
                "vectors": hidden.tolist(),
            }, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
