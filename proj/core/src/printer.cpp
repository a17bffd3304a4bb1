#include <algorithm>
#include <sstream>

#include "amb/ast.hpp"

namespace amb {

namespace {

bool uses_index(const Program& t, std::uint32_t target) {
  if (t->loose() <= target) return false;
  if (t->kind() == Kind::BVar) return t->index() == target;
  for (const auto& c : t->children()) {
    if (uses_index(c, target + (t->kind() == Kind::Lam ? 1 : 0))) return true;
  }
  for (const auto& cl : t->clauses()) {
    if (uses_index(cl.body, target + static_cast<std::uint32_t>(cl.binders.size()))) return true;
  }
  return false;
}

class ProgramPrinter {
 public:
  explicit ProgramPrinter(const Program& root) : avoid_(free_vars(root)) {}

  void print(const Program& t, int prec) {
    switch (t->kind()) {
      case Kind::Var:
        out_ << t->name();
        return;
      case Kind::BVar:
        if (t->index() < scope_.size()) {
          out_ << scope_[scope_.size() - 1 - t->index()];
        } else {
          out_ << "#" << t->index();
        }
        return;
      case Kind::Bottom:
        out_ << "bot";
        return;
      case Kind::Con:
        con(t, prec);
        return;
      case Kind::Case:
        case_expr(t);
        return;
      case Kind::Lam: {
        open(prec > 0);
        out_ << "\\";
        Program cur = t;
        std::size_t pushed = 0;
        bool first = true;
        while (cur->kind() == Kind::Lam) {
          if (!first) out_ << " ";
          first = false;
          out_ << bind(cur->name(), uses_index(cur->body(), 0));
          ++pushed;
          cur = cur->body();
        }
        out_ << ". ";
        print(cur, 0);
        scope_.resize(scope_.size() - pushed);
        close(prec > 0);
        return;
      }
      case Kind::Rec:
        open(prec > 0);
        out_ << "rec ";
        print(t->body(), 0);
        close(prec > 0);
        return;
      case Kind::StrictApp:
        open(prec > 1);
        // A bare `Left $ M` would read back as a lambda, so spell out the child.
        expand_nil_ = t->fun()->kind() == Kind::Con;
        print(t->fun(), 2);
        expand_nil_ = false;
        out_ << " $ ";
        print(t->arg(), 1);
        close(prec > 1);
        return;
      case Kind::App:
        open(prec > 2);
        print(t->fun(), 2);
        out_ << " ";
        // Precedence 4 marks an argument that is itself followed by another argument.
        print(t->arg(), prec == 2 ? 4 : 3);
        close(prec > 2);
        return;
    }
  }

  std::string str() const { return out_.str(); }

 private:
  void open(bool p) {
    if (p) out_ << "(";
  }
  void close(bool p) {
    if (p) out_ << ")";
  }

  std::string bind(const std::string& hint, bool used) {
    if (!used) {
      scope_.push_back("_");
      return "_";
    }
    std::string name = hint.empty() || hint == "_" || hint[0] == '%' ? "x" : hint;
    auto taken = [&](const std::string& n) {
      return avoid_.count(n) > 0 || std::find(scope_.begin(), scope_.end(), n) != scope_.end();
    };
    while (taken(name)) name += "'";
    scope_.push_back(name);
    return name;
  }

  // A bare constructor name directly followed by a parenthesized argument would read back
  // as a constructor application.
  void con(const Program& t, int prec) {
    Ctor c = t->ctor();
    bool expand = expand_nil_;
    expand_nil_ = false;
    bool bare = c == Ctor::Nil || (!expand && arity(c) == 1 && t->children()[0]->is_con(Ctor::Nil));
    if (bare) {
      bool wrap = prec == 2 || prec == 4;
      open(wrap);
      out_ << ctor_name(c);
      close(wrap);
      return;
    }
    out_ << ctor_name(c);
    out_ << "(";
    for (std::size_t i = 0; i < t->children().size(); ++i) {
      if (i > 0) out_ << ", ";
      print(t->children()[i], 0);
    }
    out_ << ")";
  }

  void case_expr(const Program& t) {
    out_ << "case ";
    print(t->scrutinee(), 0);
    out_ << " { ";
    bool first = true;
    for (const auto& cl : t->clauses()) {
      if (!first) out_ << "; ";
      first = false;
      out_ << ctor_name(cl.ctor);
      auto k = static_cast<std::uint32_t>(cl.binders.size());
      if (k > 0) {
        out_ << "(";
        for (std::uint32_t j = 0; j < k; ++j) {
          if (j > 0) out_ << ", ";
          out_ << bind(cl.binders[j], uses_index(cl.body, k - 1 - j));
        }
        out_ << ")";
      }
      out_ << " -> ";
      print(cl.body, 0);
      scope_.resize(scope_.size() - k);
    }
    out_ << " }";
  }

  std::set<std::string> avoid_;
  std::vector<std::string> scope_;
  std::ostringstream out_;
  bool expand_nil_ = false;
};

bool mentions_index(const Type& t, std::uint32_t target) {
  if (t->loose() <= target) return false;
  if (t->kind() == TKind::BVar) return t->index() == target;
  std::uint32_t extra = t->kind() == TKind::Fix ? 1 : 0;
  return std::any_of(t->children().begin(), t->children().end(),
                     [&](const Type& c) { return mentions_index(c, target + extra); });
}

class TypePrinter {
 public:
  explicit TypePrinter(const Type& root) : avoid_(free_vars(root)) {}

  void print(const Type& t, int prec) {
    if (sugar(t)) return;
    switch (t->kind()) {
      case TKind::Var:
        out_ << t->name();
        return;
      case TKind::BVar:
        if (t->index() < scope_.size()) {
          out_ << scope_[scope_.size() - 1 - t->index()];
        } else {
          out_ << "#" << t->index();
        }
        return;
      case TKind::Meta:
        out_ << "?" << t->index();
        return;
      case TKind::Unit:
        out_ << "1";
        return;
      case TKind::AmbT:
        out_ << "A(";
        print(t->body(), 0);
        out_ << ")";
        return;
      case TKind::Fix: {
        if (prec > 0) out_ << "(";
        std::string name = t->name().empty() ? "a" : t->name();
        auto taken = [&](const std::string& n) {
          return avoid_.count(n) > 0 || std::find(scope_.begin(), scope_.end(), n) != scope_.end();
        };
        while (taken(name)) name += "'";
        out_ << "fix " << name << ". ";
        scope_.push_back(name);
        print(t->body(), 0);
        scope_.pop_back();
        if (prec > 0) out_ << ")";
        return;
      }
      case TKind::Arrow:
        if (prec > 0) out_ << "(";
        print(t->left(), 1);
        out_ << " -> ";
        print(t->right(), 0);
        if (prec > 0) out_ << ")";
        return;
      case TKind::Sum:
        if (prec > 1) out_ << "(";
        print(t->left(), 1);
        out_ << " + ";
        print(t->right(), 2);
        if (prec > 1) out_ << ")";
        return;
      case TKind::Prod:
        if (prec > 2) out_ << "(";
        print(t->left(), 2);
        out_ << " * ";
        print(t->right(), 3);
        if (prec > 2) out_ << ")";
        return;
    }
  }

  std::string str() const { return out_.str(); }

 private:
  bool sugar(const Type& t) {
    if (alpha_equal(t, nat_t())) {
      out_ << "nat";
      return true;
    }
    if (alpha_equal(t, two_t())) {
      out_ << "2";
      return true;
    }
    if (alpha_equal(t, three_t())) {
      out_ << "3";
      return true;
    }
    if (t->kind() == TKind::Fix && t->body()->kind() == TKind::Prod) {
      const Type& elem = t->body()->left();
      const Type& rest = t->body()->right();
      if (rest->kind() == TKind::BVar && rest->index() == 0 && !mentions_index(elem, 0)) {
        out_ << "stream(";
        // The element sits under the fix binder but does not use it.
        scope_.push_back("");
        print(elem, 0);
        scope_.pop_back();
        out_ << ")";
        return true;
      }
    }
    return false;
  }

  std::set<std::string> avoid_;
  std::vector<std::string> scope_;
  std::ostringstream out_;
};

}  // namespace

std::string print(const Program& p) {
  ProgramPrinter pp(p);
  pp.print(p, 0);
  return pp.str();
}

std::string print_capped(const Program& p, std::size_t width) {
  std::string s = print(p);
  if (s.size() > width) {
    s.resize(width > 3 ? width - 3 : 0);
    s += "...";
  }
  return s;
}

std::string print(const Type& t) {
  TypePrinter tp(t);
  tp.print(t, 0);
  return tp.str();
}

}  // namespace amb
