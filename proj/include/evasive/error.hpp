#pragma once

#include <stdexcept>
#include <string>

namespace evasive {

enum class Err {
    SpecMismatch,
    DivisionByZero,
    ZeroElement,
    ZeroPolynomial,
    NotSquare,
    AmbientMismatch,
    BudgetExceeded,
    StrategyInapplicable,
    NotSpanning,
    ParamError,
    GuardFailed,
    DependentPair,
    XbarInKernel,
    NotPrimitive,
    NotSubspace,
    RecipeFailed,
    NoKnownScattered,
    MissingTowerConfig,
    Serialization,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::SpecMismatch: return "SpecMismatch";
        case Err::DivisionByZero: return "DivisionByZero";
        case Err::ZeroElement: return "ZeroElement";
        case Err::ZeroPolynomial: return "ZeroPolynomial";
        case Err::NotSquare: return "NotSquare";
        case Err::AmbientMismatch: return "AmbientMismatch";
        case Err::BudgetExceeded: return "BudgetExceeded";
        case Err::StrategyInapplicable: return "StrategyInapplicable";
        case Err::NotSpanning: return "NotSpanning";
        case Err::ParamError: return "ParamError";
        case Err::GuardFailed: return "GuardFailed";
        case Err::DependentPair: return "DependentPair";
        case Err::XbarInKernel: return "XbarInKernel";
        case Err::NotPrimitive: return "NotPrimitive";
        case Err::NotSubspace: return "NotSubspace";
        case Err::RecipeFailed: return "RecipeFailed";
        case Err::NoKnownScattered: return "NoKnownScattered";
        case Err::MissingTowerConfig: return "MissingTowerConfig";
        case Err::Serialization: return "Serialization";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
    Err code() const { return code_; }

  private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Err code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace evasive
