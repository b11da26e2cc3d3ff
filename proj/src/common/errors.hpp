#ifndef SSC_COMMON_ERRORS_HPP
#define SSC_COMMON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ssc {

// Every failure the library reports carries a stable machine-readable kind
// string. The C API maps kinds onto status codes; the CLI prints
// "<kind>: <message>" as a single line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SSC_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

SSC_DEFINE_ERROR(ParseError);
SSC_DEFINE_ERROR(ValidationError);
SSC_DEFINE_ERROR(MissingAudioError);
SSC_DEFINE_ERROR(SizeError);
SSC_DEFINE_ERROR(VocabularyError);
SSC_DEFINE_ERROR(TooShortError);
SSC_DEFINE_ERROR(InputTooShortError);
SSC_DEFINE_ERROR(ShapeError);
SSC_DEFINE_ERROR(RangeError);
SSC_DEFINE_ERROR(DomainError);
SSC_DEFINE_ERROR(EmptySplitError);
SSC_DEFINE_ERROR(CacheMissError);
SSC_DEFINE_ERROR(DegenerateClassError);
SSC_DEFINE_ERROR(TemplateError);
SSC_DEFINE_ERROR(AuthError);
SSC_DEFINE_ERROR(RateLimitError);
SSC_DEFINE_ERROR(EmptyResponseError);
SSC_DEFINE_ERROR(LengthError);
SSC_DEFINE_ERROR(ConstantInputError);
SSC_DEFINE_ERROR(AllZeroDifferencesError);
SSC_DEFINE_ERROR(SampleSizeError);
SSC_DEFINE_ERROR(ZeroVarianceError);
SSC_DEFINE_ERROR(EmptyGroupError);
SSC_DEFINE_ERROR(MissingArtifact);
SSC_DEFINE_ERROR(IoError);
SSC_DEFINE_ERROR(VersionError);
SSC_DEFINE_ERROR(HashMismatchError);

#undef SSC_DEFINE_ERROR

} // namespace ssc

#endif
