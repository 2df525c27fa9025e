#pragma once

#include <stdexcept>
#include <string>

namespace fieldsynth {

/// Base for every error raised by the library. The CLI maps subclasses onto
/// process exit codes (see tools/fieldsynth.cpp).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidDimensions : public Error {
public:
  using Error::Error;
};

class DegeneratePose : public Error {
public:
  using Error::Error;
};

class SamplingExhausted : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class LabelOutOfRange : public Error {
public:
  using Error::Error;
};

class EmptyTally : public Error {
public:
  using Error::Error;
};

/// Annotation document could not be parsed. `position` is a byte offset when
/// the JSON itself is broken, otherwise a path such as `"Middle line"[3]`.
class MalformedDocument : public Error {
public:
  MalformedDocument(std::string position, const std::string& reason)
      : Error("malformed annotation at " + position + ": " + reason),
        position_(std::move(position)) {}
  const std::string& position() const noexcept { return position_; }

private:
  std::string position_;
};

class UnknownClass : public Error {
public:
  explicit UnknownClass(const std::string& name)
      : Error("unknown line class \"" + name + "\""), name_(name) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

class CoordinateOutOfRange : public Error {
public:
  CoordinateOutOfRange(const std::string& class_name, std::size_t index, double value)
      : Error("coordinate " + std::to_string(value) + " out of [0,1] in \"" + class_name +
              "\" at point " + std::to_string(index)),
        class_name_(class_name), index_(index) {}
  const std::string& class_name() const noexcept { return class_name_; }
  std::size_t index() const noexcept { return index_; }

private:
  std::string class_name_;
  std::size_t index_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  IoError(const std::string& path, const std::string& cause)
      : Error(path + ": " + cause), path_(path) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

class MissingManifest : public Error {
public:
  explicit MissingManifest(const std::string& root)
      : Error("no manifest.jsonl under " + root + " (generation incomplete?)") {}
};

}  // namespace fieldsynth
