# Copyright 2026 The Fewshot Adapt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Scripted embedding server speaking the line-delimited JSON protocol.

The vector for a request is [len(tokens), position, number of other tokens
equal to the first token], which ignores the focus token. The mode argument
selects a misbehaviour.
"""

import json
import sys

MODE = sys.argv[1] if len(sys.argv) > 1 else "ok"


def send(obj):
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def main():
    if MODE == "nohandshake":
        sys.stdout.write("hello\n")
        sys.stdout.flush()
        return
    send({"dim": 3, "name": "fake/" + MODE})
    for line in sys.stdin:
        req = json.loads(line)
        tokens, pos = req["tokens"], req["position"]
        if MODE == "die":
            return
        if MODE == "error" or not 0 <= pos < len(tokens):
            send({"error": "position out of range"})
            continue
        if MODE == "garbage":
            sys.stdout.write("not json\n")
            sys.stdout.flush()
            continue
        others = sum(1 for i, t in enumerate(tokens) if i != pos and t == tokens[0])
        vec = [float(len(tokens)), float(pos), float(others)]
        if MODE == "baddim":
            vec = vec[:2]
        send({"vector": vec})


if __name__ == "__main__":
    main()
