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
"""Minimal JVM class-file writer used to produce the checked-in fixtures.

Emits structurally valid class files. The bytecode is not meant to pass
the verifier; it only has to be well-formed enough for a disassembler.
"""

import struct

ACC_PUBLIC = 0x0001
ACC_PRIVATE = 0x0002
ACC_STATIC = 0x0008
ACC_FINAL = 0x0010
ACC_SUPER = 0x0020
ACC_NATIVE = 0x0100
ACC_INTERFACE = 0x0200
ACC_ABSTRACT = 0x0400


def mutf8(s):
    out = bytearray()
    for ch in s:
        cp = ord(ch)
        if cp == 0:
            out += b"\xc0\x80"
        elif cp < 0x80:
            out.append(cp)
        elif cp < 0x800:
            out += bytes([0xC0 | (cp >> 6), 0x80 | (cp & 0x3F)])
        elif cp < 0x10000:
            out += bytes([0xE0 | (cp >> 12), 0x80 | ((cp >> 6) & 0x3F), 0x80 | (cp & 0x3F)])
        else:
            cp -= 0x10000
            for unit in (0xD800 | (cp >> 10), 0xDC00 | (cp & 0x3FF)):
                out += bytes([0xE0 | (unit >> 12), 0x80 | ((unit >> 6) & 0x3F), 0x80 | (unit & 0x3F)])
    return bytes(out)


class ConstantPool:
    def __init__(self):
        self.entries = []  # raw encoded entries, index = position + 1
        self.lookup = {}
        self.next_index = 1

    def _add(self, key, data, wide=False):
        if key in self.lookup:
            return self.lookup[key]
        idx = self.next_index
        self.entries.append(data)
        self.lookup[key] = idx
        self.next_index += 2 if wide else 1
        return idx

    def utf8(self, s):
        raw = mutf8(s)
        return self._add(("utf8", s), struct.pack(">BH", 1, len(raw)) + raw)

    def integer(self, v):
        return self._add(("int", v), struct.pack(">Bi", 3, v))

    def float_(self, v):
        return self._add(("float", v), struct.pack(">Bf", 4, v))

    def long(self, v):
        return self._add(("long", v), struct.pack(">Bq", 5, v), wide=True)

    def double(self, v):
        return self._add(("double", v), struct.pack(">Bd", 6, v), wide=True)

    def cls(self, name):
        return self._add(("class", name), struct.pack(">BH", 7, self.utf8(name)))

    def string(self, s):
        return self._add(("string", s), struct.pack(">BH", 8, self.utf8(s)))

    def nat(self, name, desc):
        return self._add(("nat", name, desc), struct.pack(">BHH", 12, self.utf8(name), self.utf8(desc)))

    def fieldref(self, owner, name, desc):
        return self._add(("field", owner, name, desc),
                         struct.pack(">BHH", 9, self.cls(owner), self.nat(name, desc)))

    def methodref(self, owner, name, desc):
        return self._add(("mref", owner, name, desc),
                         struct.pack(">BHH", 10, self.cls(owner), self.nat(name, desc)))

    def imethodref(self, owner, name, desc):
        return self._add(("imref", owner, name, desc),
                         struct.pack(">BHH", 11, self.cls(owner), self.nat(name, desc)))

    def method_handle(self, kind, ref_index):
        return self._add(("mh", kind, ref_index), struct.pack(">BBH", 15, kind, ref_index))

    def method_type(self, desc):
        return self._add(("mt", desc), struct.pack(">BH", 16, self.utf8(desc)))

    def dynamic(self, bsm, name, desc):
        return self._add(("dyn", bsm, name, desc), struct.pack(">BHH", 17, bsm, self.nat(name, desc)))

    def invoke_dynamic(self, bsm, name, desc):
        return self._add(("indy", bsm, name, desc), struct.pack(">BHH", 18, bsm, self.nat(name, desc)))

    def module(self, name):
        return self._add(("module", name), struct.pack(">BH", 19, self.utf8(name)))

    def package(self, name):
        return self._add(("package", name), struct.pack(">BH", 20, self.utf8(name)))

    def encode(self):
        return struct.pack(">H", self.next_index) + b"".join(self.entries)


def arg_slots(desc):
    """Counts argument slots of a method descriptor (for invokeinterface)."""
    i, n = 1, 0
    while desc[i] != ")":
        c = desc[i]
        if c in "JD":
            n += 2
            i += 1
        elif c == "L":
            n += 1
            i = desc.index(";", i) + 1
        elif c == "[":
            while desc[i] == "[":
                i += 1
            if desc[i] == "L":
                i = desc.index(";", i) + 1
            else:
                i += 1
            n += 1
        else:
            n += 1
            i += 1
    return n


# Simple (fixed length) opcodes by mnemonic.
SIMPLE = {
    "nop": 0x00, "aconst_null": 0x01, "iconst_0": 0x03, "iconst_1": 0x04,
    "lconst_0": 0x09, "dconst_1": 0x0F, "iload_0": 0x1A, "aload_0": 0x2A,
    "aload_1": 0x2B, "astore_1": 0x4C, "pop": 0x57, "pop2": 0x58, "dup": 0x59,
    "iadd": 0x60, "ladd": 0x61, "ireturn": 0xAC, "lreturn": 0xAD,
    "dreturn": 0xAF, "areturn": 0xB0, "return": 0xB1, "athrow": 0xBF,
    "arraylength": 0xBE, "monitorenter": 0xC2, "monitorexit": 0xC3,
}


class Code:
    """Tiny assembler. Instructions are appended in order; pcs are tracked."""

    def __init__(self, cp):
        self.cp = cp
        self.buf = bytearray()

    @property
    def pc(self):
        return len(self.buf)

    def op(self, mnemonic):
        self.buf.append(SIMPLE[mnemonic])
        return self

    def raw(self, data):
        self.buf += data
        return self

    def bipush(self, v):
        self.buf += struct.pack(">Bb", 0x10, v)
        return self

    def sipush(self, v):
        self.buf += struct.pack(">Bh", 0x11, v)
        return self

    def ldc_int(self, v):
        idx = self.cp.integer(v)
        if idx < 256:
            self.buf += struct.pack(">BB", 0x12, idx)
        else:
            self.buf += struct.pack(">BH", 0x13, idx)
        return self

    def ldc_string(self, s):
        idx = self.cp.string(s)
        if idx < 256:
            self.buf += struct.pack(">BB", 0x12, idx)
        else:
            self.buf += struct.pack(">BH", 0x13, idx)
        return self

    def ldc_w_index(self, idx):
        self.buf += struct.pack(">BH", 0x13, idx)
        return self

    def ldc2_long(self, v):
        self.buf += struct.pack(">BH", 0x14, self.cp.long(v))
        return self

    def ldc2_double(self, v):
        self.buf += struct.pack(">BH", 0x14, self.cp.double(v))
        return self

    def iload(self, idx):
        self.buf += struct.pack(">BB", 0x15, idx)
        return self

    def astore(self, idx):
        self.buf += struct.pack(">BB", 0x3A, idx)
        return self

    def iinc(self, idx, delta):
        self.buf += struct.pack(">BBb", 0x84, idx, delta)
        return self

    def wide_iload(self, idx):
        self.buf += struct.pack(">BBH", 0xC4, 0x15, idx)
        return self

    def wide_astore(self, idx):
        self.buf += struct.pack(">BBH", 0xC4, 0x3A, idx)
        return self

    def wide_iinc(self, idx, delta):
        self.buf += struct.pack(">BBHh", 0xC4, 0x84, idx, delta)
        return self

    def wide_ret(self, idx):
        self.buf += struct.pack(">BBH", 0xC4, 0xA9, idx)
        return self

    def getstatic(self, owner, name, desc):
        self.buf += struct.pack(">BH", 0xB2, self.cp.fieldref(owner, name, desc))
        return self

    def new(self, owner):
        self.buf += struct.pack(">BH", 0xBB, self.cp.cls(owner))
        return self

    def checkcast(self, owner):
        self.buf += struct.pack(">BH", 0xC0, self.cp.cls(owner))
        return self

    def newarray(self, atype):
        self.buf += struct.pack(">BB", 0xBC, atype)
        return self

    def anewarray(self, owner):
        self.buf += struct.pack(">BH", 0xBD, self.cp.cls(owner))
        return self

    def multianewarray(self, desc, dims):
        self.buf += struct.pack(">BHB", 0xC5, self.cp.cls(desc), dims)
        return self

    def goto(self, delta):
        self.buf += struct.pack(">Bh", 0xA7, delta)
        return self

    def goto_w(self, delta):
        self.buf += struct.pack(">Bi", 0xC8, delta)
        return self

    def ifeq(self, delta):
        self.buf += struct.pack(">Bh", 0x99, delta)
        return self

    def tableswitch(self, low, high):
        start = self.pc
        self.buf.append(0xAA)
        while len(self.buf) % 4:
            self.buf.append(0)
        count = high - low + 1
        self.buf += struct.pack(">iii", 8, low, high)
        for i in range(count):
            self.buf += struct.pack(">i", 8 + i)
        return start

    def lookupswitch(self, keys):
        start = self.pc
        self.buf.append(0xAB)
        while len(self.buf) % 4:
            self.buf.append(0)
        self.buf += struct.pack(">ii", 8, len(keys))
        for i, k in enumerate(sorted(keys)):
            self.buf += struct.pack(">ii", k, 8 + i)
        return start

    # -- invocations ---------------------------------------------------------

    def invokevirtual(self, owner, name, desc):
        self.buf += struct.pack(">BH", 0xB6, self.cp.methodref(owner, name, desc))
        return self

    def invokespecial(self, owner, name, desc, interface=False):
        ref = self.cp.imethodref(owner, name, desc) if interface else self.cp.methodref(owner, name, desc)
        self.buf += struct.pack(">BH", 0xB7, ref)
        return self

    def invokestatic(self, owner, name, desc, interface=False):
        ref = self.cp.imethodref(owner, name, desc) if interface else self.cp.methodref(owner, name, desc)
        self.buf += struct.pack(">BH", 0xB8, ref)
        return self

    def invokeinterface(self, owner, name, desc):
        self.buf += struct.pack(">BHBB", 0xB9, self.cp.imethodref(owner, name, desc), arg_slots(desc) + 1, 0)
        return self

    def invokedynamic(self, bsm, name, desc):
        self.buf += struct.pack(">BHH", 0xBA, self.cp.invoke_dynamic(bsm, name, desc), 0)
        return self


class Method:
    def __init__(self, name, desc, flags=ACC_PUBLIC, code=None):
        self.name = name
        self.desc = desc
        self.flags = flags
        self.code = code  # bytes or None


class ClassFileWriter:
    def __init__(self, name, super_name="java/lang/Object", interfaces=(), flags=ACC_PUBLIC | ACC_SUPER,
                 major=52, minor=0):
        self.cp = ConstantPool()
        self.name = name
        self.super_name = super_name
        self.interfaces = list(interfaces)
        self.flags = flags
        self.major = major
        self.minor = minor
        self.methods = []
        self.fields = []
        self.bootstrap = []  # list of (method_handle_index, [arg indices])
        # Pin the header constants first so pool layout is stable.
        self.this_index = self.cp.cls(name)
        self.super_index = self.cp.cls(super_name) if super_name else 0
        self.interface_indices = [self.cp.cls(i) for i in self.interfaces]

    def code(self):
        return Code(self.cp)

    def add_field(self, name, desc, flags=ACC_PRIVATE, constant=None):
        self.fields.append((flags, self.cp.utf8(name), self.cp.utf8(desc), constant))

    def add_method(self, name, desc, flags=ACC_PUBLIC, code=None):
        self.methods.append(Method(name, desc, flags, code))

    def add_bootstrap(self, mh_index, args=()):
        self.bootstrap.append((mh_index, list(args)))
        return len(self.bootstrap) - 1

    def _attribute(self, name, payload):
        return struct.pack(">HI", self.cp.utf8(name), len(payload)) + payload

    def encode(self):
        fields = bytearray()
        for flags, n, d, constant in self.fields:
            attrs = b""
            count = 0
            if constant is not None:
                attrs = self._attribute("ConstantValue", struct.pack(">H", constant))
                count = 1
            fields += struct.pack(">HHHH", flags, n, d, count) + attrs
        methods = bytearray()
        for m in self.methods:
            n = self.cp.utf8(m.name)
            d = self.cp.utf8(m.desc)
            attrs = b""
            count = 0
            if m.code is not None:
                code = bytes(m.code.buf if isinstance(m.code, Code) else m.code)
                # max_stack, max_locals, code, no exception table, one
                # trailing LineNumberTable so attribute skipping is exercised.
                lnt = self._attribute("LineNumberTable", struct.pack(">HHH", 1, 0, 1))
                payload = struct.pack(">HHI", 8, 300, len(code)) + code + struct.pack(">HH", 0, 1) + lnt
                attrs = self._attribute("Code", payload)
                count = 1
            methods += struct.pack(">HHHH", m.flags, n, d, count) + attrs
        class_attrs = [self._attribute("SourceFile", struct.pack(">H", self.cp.utf8(self.name.split("/")[-1] + ".java")))]
        if self.bootstrap:
            payload = struct.pack(">H", len(self.bootstrap))
            for mh, args in self.bootstrap:
                payload += struct.pack(">HH", mh, len(args)) + b"".join(struct.pack(">H", a) for a in args)
            class_attrs.append(self._attribute("BootstrapMethods", payload))
        # Constant pool must be serialized last: attribute names above add
        # entries.
        body = bytearray()
        body += struct.pack(">HHH", self.flags, self.this_index, self.super_index)
        body += struct.pack(">H", len(self.interface_indices))
        for i in self.interface_indices:
            body += struct.pack(">H", i)
        body += struct.pack(">H", len(self.fields)) + fields
        body += struct.pack(">H", len(self.methods)) + methods
        body += struct.pack(">H", len(class_attrs)) + b"".join(class_attrs)
        return struct.pack(">IHH", 0xCAFEBABE, self.minor, self.major) + self.cp.encode() + bytes(body)
