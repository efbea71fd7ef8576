#include "tripplan/error.h"

namespace tripplan {

std::string_view to_str(error_code const c) {
  switch (c) {
    case error_code::kMalformedRecord: return "MalformedRecord";
    case error_code::kDanglingReference: return "DanglingReference";
    case error_code::kScheduleInconsistent: return "ScheduleInconsistent";
    case error_code::kNonpositiveRadius: return "NonpositiveRadius";
    case error_code::kUnknownNode: return "UnknownNode";
    case error_code::kSyntaxError: return "SyntaxError";
    case error_code::kUnknownVariable: return "UnknownVariable";
    case error_code::kUnknownMode: return "UnknownMode";
    case error_code::kUnsupportedProgression: return "UnsupportedProgression";
    case error_code::kNonpositiveAnswer: return "NonpositiveAnswer";
    case error_code::kNegativeQuantity: return "NegativeQuantity";
    case error_code::kUnknownEndpoint: return "UnknownEndpoint";
    case error_code::kUnknownDataset: return "UnknownDataset";
    case error_code::kInvalidRequest: return "InvalidRequest";
  }
  return "Unknown";
}

}  // namespace tripplan
