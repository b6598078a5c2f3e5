#pragma once
#include <stdexcept>
#include <string>

namespace isophote {

enum class ErrorKind {
    SingularSpeed,
    VanishingCurvature,
    TooFewSamples,
    SingularPoint,
    NotUnitSpeed,
    DegenerateNormalData,
    NoConsistentAxis,
    NotCertifiedIsophote,
    NotAHelix,
    RadiusSlopeTooLarge,
    DomainViolation,
    FormulaInconsistent,
    ParseError,
    UnknownCatalogId,
    ParameterOutOfRange,
    IoError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::SingularSpeed:        return "SingularSpeed";
        case ErrorKind::VanishingCurvature:   return "VanishingCurvature";
        case ErrorKind::TooFewSamples:        return "TooFewSamples";
        case ErrorKind::SingularPoint:        return "SingularPoint";
        case ErrorKind::NotUnitSpeed:         return "NotUnitSpeed";
        case ErrorKind::DegenerateNormalData: return "DegenerateNormalData";
        case ErrorKind::NoConsistentAxis:     return "NoConsistentAxis";
        case ErrorKind::NotCertifiedIsophote: return "NotCertifiedIsophote";
        case ErrorKind::NotAHelix:            return "NotAHelix";
        case ErrorKind::RadiusSlopeTooLarge:  return "RadiusSlopeTooLarge";
        case ErrorKind::DomainViolation:      return "DomainViolation";
        case ErrorKind::FormulaInconsistent:  return "FormulaInconsistent";
        case ErrorKind::ParseError:           return "ParseError";
        case ErrorKind::UnknownCatalogId:     return "UnknownCatalogId";
        case ErrorKind::ParameterOutOfRange:  return "ParameterOutOfRange";
        case ErrorKind::IoError:              return "IoError";
    }
    return "Unknown";
}

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

#define ISOPHOTE_DEFINE_ERROR(Name)                              \
    class Name : public GeometryError {                          \
    public:                                                      \
        explicit Name(const std::string& what)                   \
            : GeometryError(ErrorKind::Name, what) {}            \
    };

ISOPHOTE_DEFINE_ERROR(SingularSpeed)
ISOPHOTE_DEFINE_ERROR(VanishingCurvature)
ISOPHOTE_DEFINE_ERROR(TooFewSamples)
ISOPHOTE_DEFINE_ERROR(SingularPoint)
ISOPHOTE_DEFINE_ERROR(NotUnitSpeed)
ISOPHOTE_DEFINE_ERROR(DegenerateNormalData)
ISOPHOTE_DEFINE_ERROR(NoConsistentAxis)
ISOPHOTE_DEFINE_ERROR(NotCertifiedIsophote)
ISOPHOTE_DEFINE_ERROR(NotAHelix)
ISOPHOTE_DEFINE_ERROR(RadiusSlopeTooLarge)
ISOPHOTE_DEFINE_ERROR(DomainViolation)
ISOPHOTE_DEFINE_ERROR(FormulaInconsistent)
ISOPHOTE_DEFINE_ERROR(ParseError)
ISOPHOTE_DEFINE_ERROR(UnknownCatalogId)
ISOPHOTE_DEFINE_ERROR(ParameterOutOfRange)
ISOPHOTE_DEFINE_ERROR(IoError)

#undef ISOPHOTE_DEFINE_ERROR

}  // namespace isophote
