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
// model.hpp -- identifiers and graph vocabulary shared by every module.
//
// All types here are immutable values. Their canonical text forms are the
// wire representation used by the pool and call-graph JSON files.

#ifndef CGSTITCH_MODEL_HPP
#define CGSTITCH_MODEL_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "cgstitch/error.hpp"

namespace cgstitch {

// groupId:artifactId:version. The pool index key.
class MavenCoordinate {
 public:
  // Throws Error(MalformedCoordinate) if a part is empty or contains ':'
  // or whitespace.
  MavenCoordinate(std::string group_id, std::string artifact_id,
                  std::string version);

  // Accepts exactly the three-part canonical form.
  static MavenCoordinate parse(std::string_view text);

  const std::string& group_id() const { return group_id_; }
  const std::string& artifact_id() const { return artifact_id_; }
  const std::string& version() const { return version_; }

  // "groupId:artifactId", the mediation key.
  std::string group_artifact() const;
  std::string to_string() const;

  friend bool operator==(const MavenCoordinate&,
                         const MavenCoordinate&) = default;
  friend auto operator<=>(const MavenCoordinate&,
                          const MavenCoordinate&) = default;

 private:
  std::string group_id_;
  std::string artifact_id_;
  std::string version_;
};

MavenCoordinate parse_coordinate(std::string_view text);

// Relative Maven repository directory of a coordinate:
// "<groupId with '.' as '/'>/<artifactId>/<version>". Throws
// Error(MalformedCoordinate) for parts that would escape that directory.
std::filesystem::path repository_dir(const MavenCoordinate& c);

// JVM internal binary name, e.g. "org/example/Foo". Array descriptors such
// as "[Ljava/lang/Object;" are accepted since they appear as owners of
// array method calls (clone()).
class ClassName {
 public:
  explicit ClassName(std::string internal_name);

  const std::string& str() const { return name_; }

  friend bool operator==(const ClassName&, const ClassName&) = default;
  friend auto operator<=>(const ClassName&, const ClassName&) = default;

 private:
  std::string name_;
};

bool is_valid_method_name(std::string_view name);
bool is_valid_method_descriptor(std::string_view descriptor);

struct MethodRef {
  ClassName owner;
  std::string name;
  std::string descriptor;

  // Validates name and descriptor; throws Error(InvalidName).
  MethodRef(ClassName owner, std::string name, std::string descriptor);

  // "owner.name(desc)ret"
  std::string to_string() const;

  friend bool operator==(const MethodRef&, const MethodRef&) = default;
  friend auto operator<=>(const MethodRef&, const MethodRef&) = default;
};

enum class CallKind : std::uint8_t { Static, Virtual, Interface, Special, Dynamic };

std::string_view to_string(CallKind kind);
std::optional<CallKind> call_kind_from_string(std::string_view text);
std::uint8_t opcode_of(CallKind kind);
std::optional<CallKind> call_kind_from_opcode(std::uint8_t opcode);

// A method node of the stitched graph. A missing coordinate is the PHANTOM
// sentinel: the owner class is outside the dependency set.
class GlobalMethodId {
 public:
  GlobalMethodId(MavenCoordinate coordinate, ClassName owner, std::string name,
                 std::string descriptor);

  static GlobalMethodId phantom(ClassName owner, std::string name,
                                std::string descriptor);

  bool is_phantom() const { return !coordinate_.has_value(); }
  const std::optional<MavenCoordinate>& coordinate() const { return coordinate_; }
  const ClassName& owner() const { return owner_; }
  const std::string& name() const { return name_; }
  const std::string& descriptor() const { return descriptor_; }

  // "g:a:v!owner.name(desc)" or "!phantom!!owner.name(desc)".
  const std::string& text() const { return text_; }

  friend bool operator==(const GlobalMethodId& a, const GlobalMethodId& b) {
    return a.coordinate_ == b.coordinate_ && a.owner_ == b.owner_ &&
           a.name_ == b.name_ && a.descriptor_ == b.descriptor_;
  }
  friend std::strong_ordering operator<=>(const GlobalMethodId& a,
                                          const GlobalMethodId& b);

 private:
  GlobalMethodId(std::optional<MavenCoordinate> coordinate, ClassName owner,
                 std::string name, std::string descriptor);

  std::optional<MavenCoordinate> coordinate_;
  ClassName owner_;
  std::string name_;
  std::string descriptor_;
  std::string text_;
};

inline constexpr std::string_view kPhantomText = "!phantom!";

struct Edge {
  GlobalMethodId source;
  GlobalMethodId target;
  CallKind kind;
  std::uint32_t site_pc;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend std::strong_ordering operator<=>(const Edge& a, const Edge& b);
};

}  // namespace cgstitch

template <>
struct std::hash<cgstitch::ClassName> {
  std::size_t operator()(const cgstitch::ClassName& c) const noexcept {
    return std::hash<std::string>{}(c.str());
  }
};

template <>
struct std::hash<cgstitch::MavenCoordinate> {
  std::size_t operator()(const cgstitch::MavenCoordinate& c) const noexcept {
    return std::hash<std::string>{}(c.to_string());
  }
};

template <>
struct std::hash<cgstitch::GlobalMethodId> {
  std::size_t operator()(const cgstitch::GlobalMethodId& id) const noexcept {
    return std::hash<std::string>{}(id.text());
  }
};

#endif  // CGSTITCH_MODEL_HPP
