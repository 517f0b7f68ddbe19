#!/usr/bin/env python3
# Copyright 2026 The cgstitch Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes invoke-instruction listings for every parser fixture.

Uses the `jawa` disassembler (pip install jawa==2.2.0), which shares no
code with the C++ parser. Each output line is a JSON array:

    [entry, callerOwner, callerName, callerDesc, pc, mnemonic, owner, name, desc]

`entry` is the archive path for JARs and "" for bare class files. For
invokedynamic the owner/name/desc fields are "-".
"""

import glob
import io
import json
import os
import struct
import zipfile

import jawa.constants as jc
from jawa.cf import ClassFile

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)


# jawa 2.2.0 predates CONSTANT_Dynamic and mis-sizes Module/Package; patch
# its tag tables so it can read fixtures that use them.
class ConstantDynamic(jc.InvokeDynamic):
    __slots__ = ()
    TAG = 17


def _patch_jawa():
    types = list(jc._constant_types)
    types[17] = ConstantDynamic
    jc._constant_types = tuple(types)
    fmts = list(jc._constant_fmts) + [None, None]
    fmts[17] = (">HH", 4)
    fmts[19] = (">H", 2)
    fmts[20] = (">H", 2)
    jc._constant_fmts = tuple(fmts)


_patch_jawa()

INVOKES = {0xB6: "invokevirtual", 0xB7: "invokespecial", 0xB8: "invokestatic",
           0xB9: "invokeinterface", 0xBA: "invokedynamic"}


def listing(entry, data):
    cf = ClassFile(io.BytesIO(data))
    owner = cf.this.name.value
    rows = []
    for meth in cf.methods:
        code = meth.code
        if code is None:
            continue
        for ins in code.disassemble():
            if ins.opcode not in INVOKES:
                continue
            ref = cf.constants[ins.operands[0].value]
            if ins.opcode == 0xBA:
                target = ["-", "-", "-"]
            else:
                target = [ref.class_.name.value, ref.name_and_type.name.value,
                          ref.name_and_type.descriptor.value]
            rows.append([entry, owner, meth.name.value, meth.descriptor.value, ins.pos,
                         INVOKES[ins.opcode]] + target)
    return rows


def dump(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=True) + "\n")


def main():
    for path in sorted(glob.glob(os.path.join(ROOT, "classfiles", "*.class"))):
        with open(path, "rb") as f:
            dump(path[:-len(".class")] + ".calls.jsonl", listing("", f.read()))
    for path in sorted(glob.glob(os.path.join(ROOT, "jars", "*.jar"))):
        rows = []
        with zipfile.ZipFile(path) as z:
            for info in z.infolist():
                name = info.filename
                if not name.endswith(".class") or name.startswith("META-INF/") or name.endswith("module-info.class"):
                    continue
                try:
                    rows.extend(listing(name, z.read(name)))
                except (struct.error, IndexError, KeyError, TypeError, ValueError):
                    continue
        dump(path[:-len(".jar")] + ".calls.jsonl", rows)


if __name__ == "__main__":
    main()
