#ifndef SUMAPPROX_EXPR_HPP
#define SUMAPPROX_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "sumapprox/domain.hpp"
#include "sumapprox/levelling.hpp"

namespace sumapprox {

/// Whitelisted arithmetic over point coordinates: +, -, *, min, max, abs,
/// parentheses, numeric constants, and the variables x, y, z (coordinates
/// 0, 1, 2). Used for reproducible experiment manifests.
class Expr {
  public:
    static Expr parse(const std::string& text);

    double eval(const std::vector<double>& coords) const;

    /// Evaluates the expression at every point of the domain.
    Field eval_field(const Domain& d) const;

    struct Node;  // parse tree; defined in the implementation file

  private:
    std::shared_ptr<const Node> root_;
};

}  // namespace sumapprox

#endif
