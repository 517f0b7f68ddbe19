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

#include "cgstitch/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

namespace cgstitch {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedCoordinate: return "MalformedCoordinate";
    case ErrorKind::InvalidName: return "InvalidName";
    case ErrorKind::NotAClassFile: return "NotAClassFile";
    case ErrorKind::TruncatedClassFile: return "TruncatedClassFile";
    case ErrorKind::MalformedConstantPool: return "MalformedConstantPool";
    case ErrorKind::MalformedClassFile: return "MalformedClassFile";
    case ErrorKind::NotAZip: return "NotAZip";
    case ErrorKind::DuplicateClassInPackage: return "DuplicateClassInPackage";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::CorruptEntry: return "CorruptEntry";
    case ErrorKind::HierarchyCycle: return "HierarchyCycle";
    case ErrorKind::PartsMismatch: return "PartsMismatch";
    case ErrorKind::MalformedTree: return "MalformedTree";
    case ErrorKind::ArtifactNotFound: return "ArtifactNotFound";
    case ErrorKind::TransportError: return "TransportError";
  }
  return "Unknown";
}

namespace {

bool valid_coordinate_part(std::string_view part) {
  if (part.empty()) return false;
  for (char c : part) {
    if (c == ':' || std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Parses one FieldType starting at pos; advances pos. Returns false on a
// grammar violation.
bool parse_field_type(std::string_view d, std::size_t& pos) {
  while (pos < d.size() && d[pos] == '[') ++pos;
  if (pos >= d.size()) return false;
  switch (d[pos]) {
    case 'B': case 'C': case 'D': case 'F': case 'I':
    case 'J': case 'S': case 'Z':
      ++pos;
      return true;
    case 'L': {
      std::size_t end = d.find(';', pos);
      if (end == std::string_view::npos || end == pos + 1) return false;
      std::string_view name = d.substr(pos + 1, end - pos - 1);
      for (char c : name) {
        if (c == '.' || c == '[' || c == '(' || c == ')') return false;
      }
      pos = end + 1;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

MavenCoordinate::MavenCoordinate(std::string group_id, std::string artifact_id,
                                 std::string version)
    : group_id_(std::move(group_id)),
      artifact_id_(std::move(artifact_id)),
      version_(std::move(version)) {
  if (!valid_coordinate_part(group_id_) || !valid_coordinate_part(artifact_id_) ||
      !valid_coordinate_part(version_)) {
    throw Error(ErrorKind::MalformedCoordinate,
                "malformed coordinate '" + group_id_ + ":" + artifact_id_ + ":" +
                    version_ + "'");
  }
}

MavenCoordinate MavenCoordinate::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) {
    throw Error(ErrorKind::MalformedCoordinate,
                "coordinate '" + std::string(text) +
                    "' must have exactly three ':'-separated parts");
  }
  return MavenCoordinate(std::string(parts[0]), std::string(parts[1]),
                         std::string(parts[2]));
}

std::string MavenCoordinate::group_artifact() const {
  return group_id_ + ":" + artifact_id_;
}

std::string MavenCoordinate::to_string() const {
  return group_id_ + ":" + artifact_id_ + ":" + version_;
}

MavenCoordinate parse_coordinate(std::string_view text) {
  return MavenCoordinate::parse(text);
}

std::filesystem::path repository_dir(const MavenCoordinate& c) {
  auto unsafe = [](std::string_view part) {
    return part == "." || part == ".." || part.find_first_of(std::string_view("/\\\0", 3)) !=
                                              std::string_view::npos;
  };
  std::string group = c.group_id();
  std::replace(group.begin(), group.end(), '.', '/');
  if (unsafe(c.group_id()) || group.front() == '/' || group.back() == '/' ||
      group.find("//") != std::string::npos || unsafe(c.artifact_id()) || unsafe(c.version())) {
    throw Error(ErrorKind::MalformedCoordinate,
                "coordinate '" + c.to_string() + "' does not map to a repository path");
  }
  return std::filesystem::path(group) / c.artifact_id() / c.version();
}

ClassName::ClassName(std::string internal_name) : name_(std::move(internal_name)) {
  if (name_.empty() || name_.find('.') != std::string::npos ||
      name_.front() == '/' || name_.back() == '/') {
    throw Error(ErrorKind::InvalidName, "invalid class name '" + name_ + "'");
  }
}

bool is_valid_method_name(std::string_view name) {
  if (name == "<init>" || name == "<clinit>") return true;
  if (name.empty()) return false;
  for (char c : name) {
    if (c == '.' || c == ';' || c == '[' || c == '/' || c == '<' || c == '>') {
      return false;
    }
  }
  return true;
}

bool is_valid_method_descriptor(std::string_view d) {
  if (d.empty() || d.front() != '(') return false;
  std::size_t pos = 1;
  while (pos < d.size() && d[pos] != ')') {
    if (!parse_field_type(d, pos)) return false;
  }
  if (pos >= d.size()) return false;
  ++pos;  // ')'
  if (pos < d.size() && d[pos] == 'V') return pos + 1 == d.size();
  return parse_field_type(d, pos) && pos == d.size();
}

MethodRef::MethodRef(ClassName owner_, std::string name_, std::string descriptor_)
    : owner(std::move(owner_)), name(std::move(name_)), descriptor(std::move(descriptor_)) {
  if (!is_valid_method_name(name)) {
    throw Error(ErrorKind::InvalidName, "invalid method name '" + name + "'");
  }
  if (!is_valid_method_descriptor(descriptor)) {
    throw Error(ErrorKind::InvalidName,
                "invalid method descriptor '" + descriptor + "'");
  }
}

std::string MethodRef::to_string() const {
  return owner.str() + "." + name + descriptor;
}

namespace {
constexpr std::array<std::string_view, 5> kKindNames = {
    "STATIC", "VIRTUAL", "INTERFACE", "SPECIAL", "DYNAMIC"};
constexpr std::array<std::uint8_t, 5> kKindOpcodes = {0xB8, 0xB6, 0xB9, 0xB7, 0xBA};
}  // namespace

std::string_view to_string(CallKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<CallKind> call_kind_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<CallKind>(i);
  }
  return std::nullopt;
}

std::uint8_t opcode_of(CallKind kind) {
  return kKindOpcodes[static_cast<std::size_t>(kind)];
}

std::optional<CallKind> call_kind_from_opcode(std::uint8_t opcode) {
  for (std::size_t i = 0; i < kKindOpcodes.size(); ++i) {
    if (kKindOpcodes[i] == opcode) return static_cast<CallKind>(i);
  }
  return std::nullopt;
}

GlobalMethodId::GlobalMethodId(std::optional<MavenCoordinate> coordinate,
                               ClassName owner, std::string name,
                               std::string descriptor)
    : coordinate_(std::move(coordinate)),
      owner_(std::move(owner)),
      name_(std::move(name)),
      descriptor_(std::move(descriptor)) {
  text_ = coordinate_ ? coordinate_->to_string() : std::string(kPhantomText);
  text_ += '!';
  text_ += owner_.str();
  text_ += '.';
  text_ += name_;
  text_ += descriptor_;
}

GlobalMethodId::GlobalMethodId(MavenCoordinate coordinate, ClassName owner,
                               std::string name, std::string descriptor)
    : GlobalMethodId(std::optional<MavenCoordinate>(std::move(coordinate)),
                     std::move(owner), std::move(name), std::move(descriptor)) {}

GlobalMethodId GlobalMethodId::phantom(ClassName owner, std::string name,
                                       std::string descriptor) {
  return GlobalMethodId(std::optional<MavenCoordinate>(), std::move(owner),
                        std::move(name), std::move(descriptor));
}

std::strong_ordering operator<=>(const GlobalMethodId& a, const GlobalMethodId& b) {
  if (auto c = a.text_ <=> b.text_; c != 0) return c;
  // Equal text with different fields is only possible for exotic
  // coordinates containing '!'; fall back to field order.
  if (auto c = a.coordinate_ <=> b.coordinate_; c != 0) return c;
  if (auto c = a.owner_ <=> b.owner_; c != 0) return c;
  if (auto c = a.name_ <=> b.name_; c != 0) return c;
  return a.descriptor_ <=> b.descriptor_;
}

std::strong_ordering operator<=>(const Edge& a, const Edge& b) {
  if (auto c = a.source <=> b.source; c != 0) return c;
  if (auto c = a.target <=> b.target; c != 0) return c;
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  return a.site_pc <=> b.site_pc;
}

}  // namespace cgstitch
