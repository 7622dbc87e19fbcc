#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gustrata/displayzoo.hpp"

namespace gustrata::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kPrecisionFailure = 3,
};

/// Builds a display from a module spec:
///
///   spec  := term ('+' term)*
///   term  := atom ('^' r)?
///   atom  := 'N' | 'M(' m ')' | 'ss(' n ')' | 'def(' n (';' assign (',' assign)*)? ')'
///   assign:= 's' index '=' value
///
/// A def() value is a residue field element written as the integer whose
/// base-p digits are its coordinates; unassigned parameters are zero.
DieudonneDisplay parse_module_spec(const std::string& spec, const witt::ContextPtr& ctx,
                                   zoo::DeformationConvention convention = zoo::DeformationConvention::Polarized);

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gustrata::cli
