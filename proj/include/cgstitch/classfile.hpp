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
// classfile.hpp -- JVM class file and JAR ingestion.
//
// Only what class hierarchy analysis needs is kept: hierarchy links, method
// flags and every invoke instruction. Everything else in the class file is
// skipped. For the format, see the JVM specification, chapter 4:
// https://docs.oracle.com/javase/specs/jvms/se21/html/jvms-4.html

#ifndef CGSTITCH_CLASSFILE_HPP
#define CGSTITCH_CLASSFILE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgstitch/model.hpp"

namespace cgstitch {

// Newest class-file major version the parser has been tested against
// (Java 25). Newer files are parsed best-effort with a diagnostic.
inline constexpr std::uint16_t kNewestTestedMajorVersion = 69;

struct CallSite {
  std::uint32_t pc = 0;
  CallKind kind = CallKind::Static;
  std::optional<MethodRef> declared_target;  // absent only for Dynamic

  friend bool operator==(const CallSite&, const CallSite&) = default;
};

struct MethodSummary {
  std::string name;
  std::string descriptor;
  bool is_static = false;
  bool is_abstract = false;
  bool is_private = false;
  bool is_final = false;
  std::vector<CallSite> call_sites;  // ascending pc

  friend bool operator==(const MethodSummary&, const MethodSummary&) = default;
};

struct ClassSummary {
  ClassName name;
  std::optional<ClassName> super_name;
  std::vector<ClassName> interfaces;
  bool is_interface = false;
  bool is_abstract = false;
  bool is_final = false;
  std::vector<MethodSummary> methods;
  std::uint16_t major_version = 0;

  friend bool operator==(const ClassSummary&, const ClassSummary&) = default;
};

// Parses one class file. Throws Error with kind NotAClassFile,
// TruncatedClassFile, MalformedConstantPool or MalformedClassFile.
// Non-fatal findings (e.g. an untested major version) are appended to
// `diagnostics` when it is non-null.
ClassSummary parse_class(std::span<const std::uint8_t> bytes,
                         std::vector<std::string>* diagnostics = nullptr);

// Raw bytecode of each method that has a Code attribute, in declaration
// order. Exposed for consistency checks over instruction boundaries.
struct MethodBytecode {
  std::string name;
  std::string descriptor;
  std::vector<std::uint8_t> code;
};
std::vector<MethodBytecode> method_bytecode(std::span<const std::uint8_t> bytes);

// Length in bytes of the instruction starting at `pc`, honoring switch
// padding and the wide prefix. Throws on unknown opcodes or truncation.
std::size_t instruction_length(std::span<const std::uint8_t> code, std::size_t pc);

struct JarClass {
  std::string entry_path;
  ClassSummary summary;
};

struct SkippedEntry {
  std::string entry_path;
  std::string reason;
};

struct JarContents {
  std::vector<JarClass> classes;          // central-directory order
  std::vector<SkippedEntry> skipped;      // per-entry failures
  std::vector<std::string> diagnostics;   // non-fatal parser notes
};

// Throws Error(NotAZip) when the archive itself is unreadable.
JarContents read_jar(std::span<const std::uint8_t> bytes);
JarContents read_jar(const std::filesystem::path& path);

// Whether read_jar parses an entry with this path.
bool is_ingestible_class_entry(std::string_view entry_path);

}  // namespace cgstitch

#endif  // CGSTITCH_CLASSFILE_HPP
