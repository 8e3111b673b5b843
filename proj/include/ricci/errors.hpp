#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

// Error taxonomy shared across the library. Each condition gets its own
// type so callers can catch precisely; all derive from Error.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateMetric : public Error {
public:
    using Error::Error;
};

class DegeneratePlane : public Error {
public:
    using Error::Error;
};

class FrameNotOrthonormal : public Error {
public:
    using Error::Error;
};

class VectorOutsideSubspace : public Error {
public:
    using Error::Error;
};

class BadSubspaceDim : public Error {
public:
    using Error::Error;
};

class BadInput : public Error {
public:
    using Error::Error;
};

class BadDimension : public Error {
public:
    using Error::Error;
};

class BadIndex : public Error {
public:
    using Error::Error;
};

class WrongCase : public Error {
public:
    using Error::Error;
};

class ConstructionFailure : public Error {
public:
    using Error::Error;
};

class PropertyBViolated : public Error {
public:
    using Error::Error;
};

class HypothesisNotViolated : public Error {
public:
    using Error::Error;
};

class RankAnomaly : public Error {
public:
    using Error::Error;
};

class DomainExit : public Error {
public:
    using Error::Error;
};

class OutsideInjectivityEstimate : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    using Error::Error;
};

class ExpansionAnomaly : public Error {
public:
    using Error::Error;
};

}  // namespace ricci
