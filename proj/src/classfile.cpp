// Copyright 2026 The cgstitch Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// classfile.cpp -- class file parsing down to invoke instructions.

#include "cgstitch/classfile.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <set>
#include <utility>

#include "cgstitch/zip.hpp"

namespace cgstitch {

namespace {

// Constant pool tags, JVMS table 4.4-B.
enum Tag : std::uint8_t {
  kUnusable = 0,  // second slot of a long/double
  kUtf8 = 1,
  kInteger = 3,
  kFloat = 4,
  kLong = 5,
  kDouble = 6,
  kClass = 7,
  kString = 8,
  kFieldref = 9,
  kMethodref = 10,
  kInterfaceMethodref = 11,
  kNameAndType = 12,
  kMethodHandle = 15,
  kMethodType = 16,
  kDynamic = 17,
  kInvokeDynamic = 18,
  kModule = 19,
  kPackage = 20,
};

enum AccessFlags : std::uint16_t {
  kAccPrivate = 0x0002,
  kAccStatic = 0x0008,
  kAccFinal = 0x0010,
  kAccInterface = 0x0200,
  kAccAbstract = 0x0400,
  kAccModule = 0x8000,
};

[[noreturn]] void truncated(const char* what) {
  throw Error(ErrorKind::TruncatedClassFile, std::string("truncated class file: ") + what);
}

[[noreturn]] void bad_pool(const std::string& what) {
  throw Error(ErrorKind::MalformedConstantPool, "malformed constant pool: " + what);
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorKind::MalformedClassFile, "malformed class file: " + what);
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  std::uint8_t u1(const char* what) {
    need(1, what);
    return data_[pos_++];
  }
  std::uint16_t u2(const char* what) {
    need(2, what);
    auto v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u4(const char* what) {
    need(4, what);
    std::uint32_t v = (static_cast<std::uint32_t>(data_[pos_]) << 24) |
                      (static_cast<std::uint32_t>(data_[pos_ + 1]) << 16) |
                      (static_cast<std::uint32_t>(data_[pos_ + 2]) << 8) |
                      static_cast<std::uint32_t>(data_[pos_ + 3]);
    pos_ += 4;
    return v;
  }
  std::span<const std::uint8_t> bytes(std::size_t n, const char* what) {
    need(n, what);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  void skip(std::size_t n, const char* what) { bytes(n, what); }

 private:
  void need(std::size_t n, const char* what) const {
    if (n > data_.size() - pos_) truncated(what);
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Modified UTF-8 (JVMS 4.4.7) to standard UTF-8. Surrogate pairs are
// recombined; a lone surrogate becomes U+FFFD so every name is valid UTF-8.
std::string decode_modified_utf8(std::span<const std::uint8_t> in) {
  std::vector<std::uint32_t> units;
  units.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    std::uint8_t b = in[i];
    if (b == 0 || b >= 0xF0) bad_pool("invalid byte in Utf8 constant");
    if (b < 0x80) {
      units.push_back(b);
      i += 1;
    } else if ((b & 0xE0) == 0xC0) {
      if (i + 1 >= in.size() || (in[i + 1] & 0xC0) != 0x80) bad_pool("bad 2-byte sequence");
      units.push_back(((b & 0x1Fu) << 6) | (in[i + 1] & 0x3Fu));
      i += 2;
    } else if ((b & 0xF0) == 0xE0) {
      if (i + 2 >= in.size() || (in[i + 1] & 0xC0) != 0x80 || (in[i + 2] & 0xC0) != 0x80) {
        bad_pool("bad 3-byte sequence");
      }
      units.push_back(((b & 0x0Fu) << 12) | ((in[i + 1] & 0x3Fu) << 6) | (in[i + 2] & 0x3Fu));
      i += 3;
    } else {
      bad_pool("bad leading byte in Utf8 constant");
    }
  }
  std::string out;
  out.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    std::uint32_t u = units[i];
    if (u >= 0xD800 && u <= 0xDBFF && i + 1 < units.size() && units[i + 1] >= 0xDC00 &&
        units[i + 1] <= 0xDFFF) {
      append_utf8(out, 0x10000 + ((u - 0xD800) << 10) + (units[i + 1] - 0xDC00));
      ++i;
    } else if (u >= 0xD800 && u <= 0xDFFF) {
      append_utf8(out, 0xFFFD);
    } else {
      append_utf8(out, u);
    }
  }
  return out;
}

struct Constant {
  std::uint8_t tag = kUnusable;
  std::uint16_t a = 0;  // first index operand (or reference_kind for handles)
  std::uint16_t b = 0;  // second index operand
  std::string utf8;
};

class ConstantPool {
 public:
  explicit ConstantPool(ByteReader& in) {
    std::uint16_t count = in.u2("constant_pool_count");
    if (count == 0) bad_pool("constant_pool_count is zero");
    entries_.resize(count);
    for (std::uint16_t i = 1; i < count; ++i) {
      Constant& c = entries_[i];
      c.tag = in.u1("constant tag");
      switch (c.tag) {
        case kUtf8: {
          std::uint16_t len = in.u2("Utf8 length");
          c.utf8 = decode_modified_utf8(in.bytes(len, "Utf8 bytes"));
          break;
        }
        case kInteger:
        case kFloat:
          in.skip(4, "numeric constant");
          break;
        case kLong:
        case kDouble:
          in.skip(8, "wide numeric constant");
          // Occupies two slots; the second is unusable.
          if (i + 1 >= count) bad_pool("long/double constant in last slot");
          ++i;
          break;
        case kClass:
        case kString:
        case kMethodType:
        case kModule:
        case kPackage:
          c.a = in.u2("constant index");
          break;
        case kFieldref:
        case kMethodref:
        case kInterfaceMethodref:
        case kNameAndType:
        case kDynamic:
        case kInvokeDynamic:
          c.a = in.u2("constant index");
          c.b = in.u2("constant index");
          break;
        case kMethodHandle:
          c.a = in.u1("reference_kind");
          c.b = in.u2("reference_index");
          break;
        default:
          bad_pool("unknown tag " + std::to_string(c.tag) + " at index " + std::to_string(i));
      }
    }
    validate();
  }

  const Constant& at(std::uint16_t index, std::uint8_t tag) const {
    if (index == 0 || index >= entries_.size()) {
      bad_pool("index " + std::to_string(index) + " out of range");
    }
    const Constant& c = entries_[index];
    if (c.tag != tag) {
      bad_pool("index " + std::to_string(index) + " has tag " + std::to_string(c.tag) +
               ", expected " + std::to_string(tag));
    }
    return c;
  }

  std::uint8_t tag_at(std::uint16_t index) const {
    if (index == 0 || index >= entries_.size()) {
      bad_pool("index " + std::to_string(index) + " out of range");
    }
    return entries_[index].tag;
  }

  const std::string& utf8(std::uint16_t index) const { return at(index, kUtf8).utf8; }

  const std::string& class_name(std::uint16_t index) const {
    return utf8(at(index, kClass).a);
  }

  // Method reference at `index`; `tag` is its Methodref/InterfaceMethodref.
  MethodRef method_ref(std::uint16_t index) const {
    const Constant& ref = entries_[index];
    const Constant& nat = at(ref.b, kNameAndType);
    try {
      return MethodRef(ClassName(class_name(ref.a)), utf8(nat.a), utf8(nat.b));
    } catch (const Error& e) {
      bad_pool("method reference " + std::to_string(index) + ": " + e.what());
    }
  }

 private:
  // Cross-reference checks, JVMS 4.4.
  void validate() const {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      const Constant& c = entries_[i];
      switch (c.tag) {
        case kClass:
        case kString:
        case kMethodType:
        case kModule:
        case kPackage:
          at(c.a, kUtf8);
          break;
        case kFieldref:
        case kMethodref:
        case kInterfaceMethodref:
          at(c.a, kClass);
          at(c.b, kNameAndType);
          break;
        case kNameAndType:
          at(c.a, kUtf8);
          at(c.b, kUtf8);
          break;
        case kDynamic:
        case kInvokeDynamic:
          at(c.b, kNameAndType);
          break;
        case kMethodHandle: {
          std::uint8_t target = tag_at(c.b);
          bool ok = false;
          if (c.a >= 1 && c.a <= 4) {
            ok = target == kFieldref;
          } else if (c.a == 5 || c.a == 8) {
            ok = target == kMethodref;
          } else if (c.a == 6 || c.a == 7) {
            ok = target == kMethodref || target == kInterfaceMethodref;
          } else if (c.a == 9) {
            ok = target == kInterfaceMethodref;
          }
          if (!ok) bad_pool("MethodHandle " + std::to_string(i) + " has bad reference");
          break;
        }
        default:
          break;
      }
    }
  }

  std::vector<Constant> entries_;
};

void skip_attributes(ByteReader& in) {
  std::uint16_t count = in.u2("attributes_count");
  for (std::uint16_t i = 0; i < count; ++i) {
    in.u2("attribute_name_index");
    std::uint32_t len = in.u4("attribute_length");
    in.skip(len, "attribute body");
  }
}

constexpr std::uint8_t kVar = 0xFF;  // variable length
constexpr std::uint8_t kBad = 0;     // not a valid opcode

// Instruction lengths for opcodes 0x00-0xC9, JVMS chapter 6.
constexpr std::array<std::uint8_t, 256> make_length_table() {
  std::array<std::uint8_t, 256> t{};
  for (int op = 0x00; op <= 0xC9; ++op) t[op] = 1;
  t[0x10] = 2;                                      // bipush
  t[0x11] = 3;                                      // sipush
  t[0x12] = 2;                                      // ldc
  t[0x13] = 3;                                      // ldc_w
  t[0x14] = 3;                                      // ldc2_w
  for (int op = 0x15; op <= 0x19; ++op) t[op] = 2;  // xload
  for (int op = 0x36; op <= 0x3A; ++op) t[op] = 2;  // xstore
  t[0x84] = 3;                                      // iinc
  for (int op = 0x99; op <= 0xA8; ++op) t[op] = 3;  // if*, goto, jsr
  t[0xA9] = 2;                                      // ret
  t[0xAA] = kVar;                                   // tableswitch
  t[0xAB] = kVar;                                   // lookupswitch
  for (int op = 0xB2; op <= 0xB8; ++op) t[op] = 3;  // field access, invokes
  t[0xB9] = 5;                                      // invokeinterface
  t[0xBA] = 5;                                      // invokedynamic
  t[0xBB] = 3;                                      // new
  t[0xBC] = 2;                                      // newarray
  t[0xBD] = 3;                                      // anewarray
  t[0xC0] = 3;                                      // checkcast
  t[0xC1] = 3;                                      // instanceof
  t[0xC4] = kVar;                                   // wide
  t[0xC5] = 4;                                      // multianewarray
  t[0xC6] = 3;                                      // ifnull
  t[0xC7] = 3;                                      // ifnonnull
  t[0xC8] = 5;                                      // goto_w
  t[0xC9] = 5;                                      // jsr_w
  for (int op = 0xCA; op <= 0xFF; ++op) t[op] = kBad;
  return t;
}

constexpr auto kLengths = make_length_table();

std::int32_t read_s4(std::span<const std::uint8_t> code, std::size_t pos) {
  if (pos + 4 > code.size()) truncated("switch operands");
  return static_cast<std::int32_t>((static_cast<std::uint32_t>(code[pos]) << 24) |
                                   (static_cast<std::uint32_t>(code[pos + 1]) << 16) |
                                   (static_cast<std::uint32_t>(code[pos + 2]) << 8) |
                                   static_cast<std::uint32_t>(code[pos + 3]));
}

struct RawMethod {
  std::uint16_t access = 0;
  std::string name;
  std::string descriptor;
  std::optional<std::vector<std::uint8_t>> code;
};

struct RawClass {
  std::uint16_t major = 0;
  std::uint16_t access = 0;
  std::string name;
  std::optional<std::string> super_name;
  std::vector<std::string> interfaces;
  std::vector<RawMethod> methods;
};

// Walks the class structure and hands back raw pieces; the pool stays
// alive for operand resolution via the callback-free two-step below.
RawClass read_structure(std::span<const std::uint8_t> bytes, ConstantPool*& pool_out,
                        std::unique_ptr<ConstantPool>& pool_holder) {
  ByteReader in(bytes);
  if (bytes.size() < 4) {
    if (bytes.size() >= 1 && bytes[0] != 0xCA) {
      throw Error(ErrorKind::NotAClassFile, "bad magic");
    }
    truncated("magic");
  }
  if (in.u4("magic") != 0xCAFEBABE) throw Error(ErrorKind::NotAClassFile, "bad magic");
  RawClass raw;
  in.u2("minor_version");
  raw.major = in.u2("major_version");
  pool_holder = std::make_unique<ConstantPool>(in);
  pool_out = pool_holder.get();
  const ConstantPool& pool = *pool_holder;

  raw.access = in.u2("access_flags");
  raw.name = pool.class_name(in.u2("this_class"));
  std::uint16_t super_index = in.u2("super_class");
  if (super_index != 0) raw.super_name = pool.class_name(super_index);
  std::uint16_t interface_count = in.u2("interfaces_count");
  for (std::uint16_t i = 0; i < interface_count; ++i) {
    raw.interfaces.push_back(pool.class_name(in.u2("interface index")));
  }

  std::uint16_t field_count = in.u2("fields_count");
  for (std::uint16_t i = 0; i < field_count; ++i) {
    in.skip(6, "field_info");
    skip_attributes(in);
  }

  std::uint16_t method_count = in.u2("methods_count");
  for (std::uint16_t i = 0; i < method_count; ++i) {
    RawMethod m;
    m.access = in.u2("method access_flags");
    m.name = pool.utf8(in.u2("method name_index"));
    m.descriptor = pool.utf8(in.u2("method descriptor_index"));
    std::uint16_t attr_count = in.u2("method attributes_count");
    for (std::uint16_t a = 0; a < attr_count; ++a) {
      const std::string& attr_name = pool.utf8(in.u2("attribute_name_index"));
      std::uint32_t len = in.u4("attribute_length");
      auto body = in.bytes(len, "method attribute");
      if (attr_name != "Code") continue;
      if (m.code) malformed(m.name + m.descriptor + " has two Code attributes");
      ByteReader code_in(body);
      code_in.skip(4, "max_stack/max_locals");
      std::uint32_t code_len = code_in.u4("code_length");
      auto code = code_in.bytes(code_len, "bytecode");
      std::uint16_t handlers = code_in.u2("exception_table_length");
      code_in.skip(static_cast<std::size_t>(handlers) * 8, "exception_table");
      skip_attributes(code_in);
      if (!code_in.at_end()) malformed("Code attribute length mismatch in " + m.name);
      m.code.emplace(code.begin(), code.end());
    }
    raw.methods.push_back(std::move(m));
  }
  skip_attributes(in);
  if (!in.at_end()) malformed("trailing bytes after class attributes");
  return raw;
}

CallSite decode_invoke(const ConstantPool& pool, std::uint8_t opcode, std::uint16_t index,
                       std::uint32_t pc) {
  CallSite site;
  site.pc = pc;
  site.kind = *call_kind_from_opcode(opcode);
  std::uint8_t tag = pool.tag_at(index);
  bool ok = false;
  switch (site.kind) {
    case CallKind::Virtual:
      ok = tag == kMethodref;
      break;
    case CallKind::Interface:
      ok = tag == kInterfaceMethodref;
      break;
    case CallKind::Static:
    case CallKind::Special:
      ok = tag == kMethodref || tag == kInterfaceMethodref;
      break;
    case CallKind::Dynamic:
      ok = tag == kInvokeDynamic;
      break;
  }
  if (!ok) {
    bad_pool(std::string(to_string(site.kind)) + " invoke at pc " + std::to_string(pc) +
             " references constant " + std::to_string(index) + " with tag " +
             std::to_string(tag));
  }
  if (site.kind != CallKind::Dynamic) site.declared_target = pool.method_ref(index);
  return site;
}

std::vector<CallSite> extract_call_sites(const ConstantPool& pool,
                                         std::span<const std::uint8_t> code) {
  std::vector<CallSite> sites;
  for (std::size_t pc = 0; pc < code.size();) {
    std::size_t len = instruction_length(code, pc);
    std::uint8_t op = code[pc];
    if (op >= 0xB6 && op <= 0xBA) {
      auto index = static_cast<std::uint16_t>((code[pc + 1] << 8) | code[pc + 2]);
      sites.push_back(decode_invoke(pool, op, index, static_cast<std::uint32_t>(pc)));
    }
    pc += len;
  }
  return sites;
}

}  // namespace

std::size_t instruction_length(std::span<const std::uint8_t> code, std::size_t pc) {
  if (pc >= code.size()) truncated("instruction");
  std::uint8_t op = code[pc];
  std::uint8_t fixed = kLengths[op];
  std::size_t len = 0;
  if (fixed == kBad) {
    malformed("invalid opcode 0x" + std::to_string(op) + " at pc " + std::to_string(pc));
  } else if (fixed != kVar) {
    len = fixed;
  } else if (op == 0xC4) {  // wide
    if (pc + 1 >= code.size()) truncated("wide");
    std::uint8_t inner = code[pc + 1];
    if (inner == 0x84) {
      len = 6;
    } else if ((inner >= 0x15 && inner <= 0x19) || (inner >= 0x36 && inner <= 0x3A) ||
               inner == 0xA9) {
      len = 4;
    } else {
      malformed("wide prefix on opcode " + std::to_string(inner) + " at pc " +
                std::to_string(pc));
    }
  } else {
    // Operands start at the next multiple of four from the method start.
    std::size_t base = (pc + 4) & ~static_cast<std::size_t>(3);
    if (op == 0xAA) {
      std::int64_t low = read_s4(code, base + 4);
      std::int64_t high = read_s4(code, base + 8);
      if (high < low) malformed("tableswitch high < low at pc " + std::to_string(pc));
      len = base - pc + 12 + 4 * static_cast<std::size_t>(high - low + 1);
    } else {
      std::int32_t pairs = read_s4(code, base + 4);
      if (pairs < 0) malformed("negative lookupswitch npairs at pc " + std::to_string(pc));
      len = base - pc + 8 + 8 * static_cast<std::size_t>(pairs);
    }
  }
  if (len > code.size() - pc) truncated("instruction operands");
  return len;
}

ClassSummary parse_class(std::span<const std::uint8_t> bytes,
                         std::vector<std::string>* diagnostics) {
  ConstantPool* pool = nullptr;
  std::unique_ptr<ConstantPool> holder;
  RawClass raw = read_structure(bytes, pool, holder);

  auto to_class_name = [](const std::string& n) {
    try {
      return ClassName(n);
    } catch (const Error& e) {
      bad_pool(e.what());
    }
  };

  ClassSummary out{to_class_name(raw.name), {}, {}, false, false, false, {}, 0};
  out.major_version = raw.major;
  if (raw.super_name) {
    out.super_name = to_class_name(*raw.super_name);
  } else if (raw.name != "java/lang/Object" && !(raw.access & kAccModule)) {
    malformed(raw.name + " has no superclass");
  }
  for (const auto& i : raw.interfaces) out.interfaces.push_back(to_class_name(i));
  out.is_interface = raw.access & kAccInterface;
  out.is_abstract = raw.access & kAccAbstract;
  out.is_final = raw.access & kAccFinal;
  if (out.is_interface && !out.is_abstract) {
    out.is_abstract = true;
    if (diagnostics) diagnostics->push_back(raw.name + ": interface without ACC_ABSTRACT");
  }
  if (raw.major > kNewestTestedMajorVersion && diagnostics) {
    diagnostics->push_back(raw.name + ": class file major version " +
                           std::to_string(raw.major) + " is newer than " +
                           std::to_string(kNewestTestedMajorVersion) +
                           "; parsed best-effort");
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (auto& m : raw.methods) {
    if (!is_valid_method_name(m.name) || !is_valid_method_descriptor(m.descriptor)) {
      malformed(raw.name + ": invalid method " + m.name + m.descriptor);
    }
    if (!seen.emplace(m.name, m.descriptor).second) {
      malformed(raw.name + ": duplicate method " + m.name + m.descriptor);
    }
    MethodSummary ms;
    ms.name = std::move(m.name);
    ms.descriptor = std::move(m.descriptor);
    ms.is_static = m.access & kAccStatic;
    ms.is_abstract = m.access & kAccAbstract;
    ms.is_private = m.access & kAccPrivate;
    ms.is_final = m.access & kAccFinal;
    if (m.code) {
      if (ms.is_abstract) malformed(raw.name + ": abstract method " + ms.name + " has code");
      ms.call_sites = extract_call_sites(*pool, *m.code);
    }
    out.methods.push_back(std::move(ms));
  }
  return out;
}

std::vector<MethodBytecode> method_bytecode(std::span<const std::uint8_t> bytes) {
  ConstantPool* pool = nullptr;
  std::unique_ptr<ConstantPool> holder;
  RawClass raw = read_structure(bytes, pool, holder);
  std::vector<MethodBytecode> out;
  for (auto& m : raw.methods) {
    if (m.code) out.push_back({std::move(m.name), std::move(m.descriptor), std::move(*m.code)});
  }
  return out;
}

bool is_ingestible_class_entry(std::string_view path) {
  constexpr std::string_view kSuffix = ".class";
  if (path.size() < kSuffix.size() || path.substr(path.size() - kSuffix.size()) != kSuffix) {
    return false;
  }
  if (path.starts_with("META-INF/")) return false;
  std::size_t slash = path.rfind('/');
  std::string_view file = slash == std::string_view::npos ? path : path.substr(slash + 1);
  return file != "module-info.class";
}

JarContents read_jar(std::span<const std::uint8_t> bytes) {
  zip::Archive archive(bytes);
  JarContents out;
  for (const auto& entry : archive.entries()) {
    if (!is_ingestible_class_entry(entry.name)) continue;
    try {
      std::vector<std::uint8_t> data = archive.read(entry);
      out.classes.push_back({entry.name, parse_class(data, &out.diagnostics)});
    } catch (const Error& e) {
      out.skipped.push_back({entry.name, std::string(to_string(e.kind())) + ": " + e.what()});
    }
  }
  return out;
}

JarContents read_jar(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (f.bad()) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  return read_jar(bytes);
}

}  // namespace cgstitch
