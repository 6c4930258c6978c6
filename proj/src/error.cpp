#include "protproj/error.hpp"

namespace protproj {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::NoAtomSites: return "NoAtomSites";
    case ErrorCode::EmptyStructure: return "EmptyStructure";
    case ErrorCode::UnknownAminoAcid: return "UnknownAminoAcid";
    case ErrorCode::EmptyProjection: return "EmptyProjection";
    case ErrorCode::UnknownResidueReference: return "UnknownResidueReference";
    case ErrorCode::OutputNotWritable: return "OutputNotWritable";
    case ErrorCode::AllInputsFailed: return "AllInputsFailed";
    case ErrorCode::TooFewEntries: return "TooFewEntries";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
    case ErrorCode::Io: return "Io";
  }
  return "Error";
}

}  // namespace protproj
