#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mpvc/util.hpp"

namespace mpvc {

enum class ArithKind { I8, U8, I16, U16, I32, U32, I64, U64 };

const char* arith_name(ArithKind k);
unsigned arith_bits(ArithKind k);
bool arith_signed(ArithKind k);
Int arith_min(ArithKind k);
Int arith_max(ArithKind k);
// Two's complement wrap-around into the range of k.
Int wrap(Int v, ArithKind k);

struct CType;
using TypeRef = std::shared_ptr<const CType>;

struct Field {
    std::string name;       // source name
    std::string qualified;  // record-prefixed, globally unique
    TypeRef type;
    Int offset = 0;
};

// ILP32 layout: pointers and i32 are 4 bytes, natural alignment.
struct CType {
    enum class Tag { Arith, Ptr, Record, Array, Null };
    Tag tag = Tag::Arith;
    ArithKind arith = ArithKind::I32;
    TypeRef elem;  // pointee or array element
    Int length = 0;
    std::string name;  // record name
    std::vector<Field> fields;
    Int size = 0;
    Int align = 1;

    bool is_arith() const { return tag == Tag::Arith; }
    bool is_ptr() const { return tag == Tag::Ptr || tag == Tag::Null; }
    bool is_scalar() const { return is_arith() || is_ptr(); }
    bool is_record() const { return tag == Tag::Record; }
    bool is_array() const { return tag == Tag::Array; }
    const Field* field(const std::string& name) const;
};

TypeRef arith_type(ArithKind k);
TypeRef ptr_type(TypeRef pointee);
TypeRef null_type();
TypeRef array_type(TypeRef elem, Int n);
// Computes the layout of the given fields in declaration order.
TypeRef record_type(const std::string& name, std::vector<Field> fields);

bool same_type(const TypeRef& a, const TypeRef& b);
std::string type_str(const TypeRef& t);
Int size_of(const TypeRef& t);
Int offset_of(const TypeRef& record, const std::string& field);

struct Cell {
    std::string path;  // e.g. ".in1", "[3]", "" for scalars
    Int offset = 0;
    Int size = 0;
    TypeRef type;
};

// Scalar cells in layout order, following the inductive cell-path definition.
std::vector<Cell> scalar_cells(const TypeRef& t);

// ---------------------------------------------------------------------------
// AST

struct Expr;
struct Lval;
struct Stmt;
using ExprRef = std::shared_ptr<const Expr>;
using LvalRef = std::shared_ptr<const Lval>;
using StmtRef = std::shared_ptr<const Stmt>;

struct Lval {
    enum class Kind { Var, Field, Deref };
    Kind kind = Kind::Var;
    int var = -1;
    LvalRef base;                  // Field
    const Field* field = nullptr;  // Field
    ExprRef addr;                  // Deref
    TypeRef type;
    int occ = 0;  // source occurrence; unrolled copies of a loop body share it
};

enum class UnOp { Neg, Not };
enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
const char* binop_str(BinOp op);

struct Expr {
    enum class Kind {
        Const,   // integer literal
        Nondet,  // nondet(): fresh input from the run's seed
        Read,    // scalar lvalue read (integer or pointer)
        Decay,   // array lvalue used as an address
        AddrOf,  // &lv
        PtrAdd,  // a + ie
        Null,
        Unary,
        Binary,
        PtrCmp  // a == a' or a != a'
    };
    Kind kind = Kind::Const;
    Int value = 0;
    LvalRef lval;
    ExprRef a, b;
    UnOp uop = UnOp::Neg;
    BinOp bop = BinOp::Add;
    TypeRef type;

    bool is_addr() const { return type->is_ptr(); }
};

using StmtId = int;

struct Stmt {
    enum class Kind { Assign, Assert, Assume, If, Entry };
    Kind kind = Kind::Assign;
    StmtId id = 0;
    LvalRef lhs;
    ExprRef e;
    std::vector<StmtRef> then_body, else_body;
    int line = 0;
    std::string origin;  // source line plus loop-iteration suffix
};

struct Var {
    std::string name;
    TypeRef type;
};

struct Program {
    std::vector<TypeRef> records;  // declaration order
    std::vector<Var> vars;
    std::vector<StmtRef> body;
    std::vector<const Stmt*> stmts;  // preorder, index = id - 1

    int var_index(const std::string& name) const;
    const Stmt* stmt(StmtId id) const { return stmts.at(static_cast<size_t>(id - 1)); }
    size_t total_cells() const;
};

struct Diagnostic : Error {
    int line, col;
    Diagnostic(int l, int c, const std::string& msg)
        : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}
};

struct ParseOptions {
    unsigned unroll_bound = 1024;
};

// Parses, unrolls bounded loops and type-checks. Throws Diagnostic.
Program parse_program(const std::string& source, const ParseOptions& opts = {});
Program parse_file(const std::string& path, const ParseOptions& opts = {});

std::string print_program(const Program& p);
std::string print_expr(const Program& p, const ExprRef& e);
std::string print_lval(const Program& p, const LvalRef& lv);
bool same_program(const Program& a, const Program& b);

// Visits every lvalue inside an expression / statement (not into nested bodies).
void for_each_lval(const ExprRef& e, const std::function<void(const LvalRef&)>& f);
void for_each_lval(const LvalRef& lv, const std::function<void(const LvalRef&)>& f);
void for_each_lval(const Stmt& s, const std::function<void(const LvalRef&)>& f);

}  // namespace mpvc
