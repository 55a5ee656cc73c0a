// JSON formats for instances, schedules and dual certificates. Rationals are strings.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "minrate/certificate.hpp"
#include "minrate/instance.hpp"
#include "minrate/schedule.hpp"

namespace minrate {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance parse_instance(const std::string& text);
std::string dump_instance(const Instance& instance);

struct ScheduleFile {
  Schedule schedule;
  std::optional<Rational> rate;
};

ScheduleFile parse_schedule(const std::string& text);
std::string dump_schedule(const Schedule& schedule, const std::optional<Rational>& rate = std::nullopt);

struct CertificateFile {
  DualCertificate certificate;
  DepletionStructure structure;
  SpeedLevelTable levels;
};

CertificateFile parse_certificate(const std::string& text);
std::string dump_certificate(const DualCertificate& certificate, const DepletionStructure& structure,
                             const SpeedLevelTable& levels);

/// Whole-file helpers; FormatError on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace minrate
