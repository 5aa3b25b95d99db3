#include "tubefocal/expression.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

namespace tubefocal {

SymbolTable SymbolTable::curve() {
  SymbolTable s = constants_only();
  s.variables = {"u"};
  return s;
}

SymbolTable SymbolTable::surface() {
  SymbolTable s = constants_only();
  s.variables = {"s", "t"};
  return s;
}

SymbolTable SymbolTable::constants_only() {
  SymbolTable s;
  s.constants = {{"pi", std::numbers::pi}, {"sqrt2", std::numbers::sqrt2}, {"e", std::numbers::e}};
  return s;
}

bool contains_variable(const ExprNode& n) {
  if (n.kind == ExprNode::Kind::Variable) return true;
  if (n.a && contains_variable(*n.a)) return true;
  if (n.b && contains_variable(*n.b)) return true;
  return false;
}

namespace {

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Type type = Type::End;
  double number = 0.0;
  std::string text;
  size_t position = 0;
};

class Scanner {
 public:
  explicit Scanner(const std::string& text) : text_(text) { advance(); }

  const Token& current() const { return current_; }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_ = Token{};
    current_.position = pos_;
    if (pos_ >= text_.size()) {
      current_.type = Token::Type::End;
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      scan_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_.type = Token::Type::Ident;
      current_.text = text_.substr(start, pos_ - start);
      return;
    }
    switch (c) {
      case '+': current_.type = Token::Type::Plus; break;
      case '-': current_.type = Token::Type::Minus; break;
      case '*': current_.type = Token::Type::Star; break;
      case '/': current_.type = Token::Type::Slash; break;
      case '^': current_.type = Token::Type::Caret; break;
      case '(': current_.type = Token::Type::LParen; break;
      case ')': current_.type = Token::Type::RParen; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }
    ++pos_;
  }

 private:
  void scan_number() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw SyntaxError("expected digits after decimal point", pos_);
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // the e belongs to a following identifier, not this number
      }
    }
    const std::string slice = text_.substr(start, pos_ - start);
    double value = 0.0;
    const auto res = std::from_chars(slice.data(), slice.data() + slice.size(), value);
    if (res.ec != std::errc{}) throw SyntaxError("malformed number '" + slice + "'", start);
    current_.type = Token::Type::Number;
    current_.number = value;
  }

  const std::string& text_;
  size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  Parser(const std::string& text, const SymbolTable& symbols)
      : scanner_(text), symbols_(symbols) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    expect(Token::Type::End, "end of input");
    return e;
  }

 private:
  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (true) {
      const auto t = scanner_.current().type;
      if (t == Token::Type::Plus || t == Token::Type::Minus) {
        scanner_.advance();
        lhs = make_binary(t == Token::Type::Plus ? BinaryOp::Add : BinaryOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (true) {
      const auto t = scanner_.current().type;
      if (t == Token::Type::Star || t == Token::Type::Slash) {
        scanner_.advance();
        lhs = make_binary(t == Token::Type::Star ? BinaryOp::Mul : BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    if (scanner_.current().type == Token::Type::Minus) {
      scanner_.advance();
      return make_unary(UnaryOp::Neg, parse_unary());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (scanner_.current().type != Token::Type::Caret) return base;
    const size_t caret_pos = scanner_.current().position;
    scanner_.advance();
    ExprPtr exponent = parse_unary();
    if (contains_variable(*exponent))
      throw SyntaxError("exponent must be a constant expression", caret_pos);
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Pow;
    node->a = base;
    node->value = detail::eval_node<double>(*exponent, {});
    return node;
  }

  ExprPtr parse_primary() {
    const Token tok = scanner_.current();
    switch (tok.type) {
      case Token::Type::Number: {
        scanner_.advance();
        auto node = std::make_shared<ExprNode>();
        node->kind = ExprNode::Kind::Literal;
        node->value = tok.number;
        return node;
      }
      case Token::Type::LParen: {
        scanner_.advance();
        ExprPtr e = parse_expr();
        expect(Token::Type::RParen, "')'");
        return e;
      }
      case Token::Type::Ident: {
        scanner_.advance();
        if (scanner_.current().type == Token::Type::LParen) {
          const UnaryOp op = function_op(tok);
          scanner_.advance();
          ExprPtr arg = parse_expr();
          expect(Token::Type::RParen, "')'");
          return make_unary(op, arg);
        }
        return resolve_name(tok);
      }
      default:
        throw SyntaxError("expected a number, identifier, or '('", tok.position);
    }
  }

  UnaryOp function_op(const Token& tok) const {
    if (tok.text == "sin") return UnaryOp::Sin;
    if (tok.text == "cos") return UnaryOp::Cos;
    if (tok.text == "tan") return UnaryOp::Tan;
    if (tok.text == "ln") return UnaryOp::Log;
    if (tok.text == "sqrt") return UnaryOp::Sqrt;
    throw UnknownIdentifier(tok.text, tok.position);
  }

  ExprPtr resolve_name(const Token& tok) const {
    for (size_t i = 0; i < symbols_.variables.size(); ++i) {
      if (symbols_.variables[i] == tok.text) {
        auto node = std::make_shared<ExprNode>();
        node->kind = ExprNode::Kind::Variable;
        node->index = static_cast<int>(i);
        node->name = tok.text;
        return node;
      }
    }
    for (const auto& [name, value] : symbols_.constants) {
      if (name == tok.text) {
        auto node = std::make_shared<ExprNode>();
        node->kind = ExprNode::Kind::Constant;
        node->name = name;
        node->value = value;
        return node;
      }
    }
    throw UnknownIdentifier(tok.text, tok.position);
  }

  void expect(Token::Type type, const std::string& what) {
    if (scanner_.current().type != type)
      throw SyntaxError("expected " + what, scanner_.current().position);
    scanner_.advance();
  }

  static ExprPtr make_unary(UnaryOp op, ExprPtr a) {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Unary;
    node->uop = op;
    node->a = std::move(a);
    return node;
  }

  static ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Binary;
    node->bop = op;
    node->a = std::move(a);
    node->b = std::move(b);
    return node;
  }

  Scanner scanner_;
  const SymbolTable& symbols_;
};

// precedence for minimal-paren printing; atoms bind tightest
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Binary:
      return (n.bop == BinaryOp::Add || n.bop == BinaryOp::Sub) ? 1 : 2;
    case ExprNode::Kind::Unary:
      return n.uop == UnaryOp::Neg ? 3 : 5;  // function calls are self-delimiting
    case ExprNode::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprNode::Kind::Literal:
      out += format_double(n.value);
      return;
    case ExprNode::Kind::Constant:
    case ExprNode::Kind::Variable:
      out += n.name;
      return;
    case ExprNode::Kind::Unary:
      switch (n.uop) {
        case UnaryOp::Neg:
          out += '-';
          print_child(*n.a, 3, out);
          return;
        case UnaryOp::Sin: out += "sin("; break;
        case UnaryOp::Cos: out += "cos("; break;
        case UnaryOp::Tan: out += "tan("; break;
        case UnaryOp::Log: out += "ln("; break;
        case UnaryOp::Sqrt: out += "sqrt("; break;
      }
      print_node(*n.a, out);
      out += ')';
      return;
    case ExprNode::Kind::Binary: {
      const int prec = precedence(n);
      print_child(*n.a, prec, out);
      switch (n.bop) {
        case BinaryOp::Add: out += '+'; break;
        case BinaryOp::Sub: out += '-'; break;
        case BinaryOp::Mul: out += '*'; break;
        case BinaryOp::Div: out += '/'; break;
      }
      // the grammar is left-associative, so an equal-precedence right child
      // must keep its parentheses for the reparse to rebuild the same shape
      print_child(*n.b, prec + 1, out);
      return;
    }
    case ExprNode::Kind::Pow:
      print_child(*n.a, 5, out);
      out += '^';
      if (n.value < 0.0) {
        out += '-';
        out += format_double(-n.value);
      } else {
        out += format_double(n.value);
      }
      return;
  }
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Literal:
      return a.value == b.value;
    case ExprNode::Kind::Constant:
      return a.name == b.name && a.value == b.value;
    case ExprNode::Kind::Variable:
      return a.index == b.index && a.name == b.name;
    case ExprNode::Kind::Unary:
      return a.uop == b.uop && nodes_equal(*a.a, *b.a);
    case ExprNode::Kind::Binary:
      return a.bop == b.bop && nodes_equal(*a.a, *b.a) && nodes_equal(*a.b, *b.b);
    case ExprNode::Kind::Pow:
      return a.value == b.value && nodes_equal(*a.a, *b.a);
  }
  return false;
}

}  // namespace

std::string ExprTree::str() const {
  if (!root_) return "";
  std::string out;
  print_node(*root_, out);
  return out;
}

bool operator==(const ExprTree& a, const ExprTree& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return nodes_equal(a.root(), b.root());
}

ExprTree parse_expr(const std::string& text, const SymbolTable& symbols) {
  Parser parser(text, symbols);
  return ExprTree(parser.parse(), symbols.variables);
}

}  // namespace tubefocal
