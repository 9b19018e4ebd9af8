//! Recursive-descent parser producing unresolved declarations. Names are
//! resolved against the whole workspace afterwards, so documents may refer
//! to each other in any order.

use crate::error::{Error, Result};
use crate::text::lexer::{tokenize, Tok, Token};
use crate::translate::{InsertPolicy, Strategy};
use crate::views::CompareOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn err(self, message: impl Into<String>) -> Error {
        Error::Resolution(format!("{}:{}: {}", self.line, self.column, message.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Name {
    pub text: String,
    pub pos: Pos,
}

/// A value as written: the `null` keyword or a named domain member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Literal {
    Null,
    Name(String),
}

/// One `+(...)` or `-(...)` entry of an update literal.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RowEdit {
    pub add: bool,
    pub values: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawOperand {
    Column(usize),
    Value(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawPred {
    True,
    Compare(usize, CompareOp, RawOperand),
    IsNull(usize),
    And(Box<RawPred>, Box<RawPred>),
    Or(Box<RawPred>, Box<RawPred>),
    Not(Box<RawPred>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawView {
    Select(Name, RawPred),
    Project(Name, Vec<usize>, Vec<usize>),
    Union(Name, Name),
    HierJoin(Name, Name, Vec<(usize, usize)>),
    FkJoin(Name, Name, Vec<(usize, usize)>),
    Childless(Name, Name, Vec<(usize, usize)>),
    Join(Name, Name, Vec<(usize, CompareOp, usize)>),
    Table(Name),
    Product(Box<RawView>, Box<RawView>),
    Tabulated(Vec<(Name, String)>),
    Zero,
    One,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TableClause {
    Key(Vec<usize>),
    Fk(usize, Name, usize),
    NotAllNull(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Decl {
    Domain(Name, Vec<Literal>),
    Table(Name, Vec<Name>, Vec<TableClause>),
    State(Name, Vec<(Name, Vec<Vec<Literal>>)>),
    View(Name, RawView),
    Update(Name, Vec<Vec<RowEdit>>),
    Strategy(Name, Strategy),
}

pub(crate) fn parse_document(src: &str) -> Result<Vec<Decl>> {
    let mut p = Parser { toks: tokenize(src)?, at: 0 };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

/// Parses a standalone view expression.
pub(crate) fn parse_view_expr(src: &str) -> Result<RawView> {
    let mut p = Parser { toks: tokenize(src)?, at: 0 };
    let v = p.view()?;
    p.expect_eof()?;
    Ok(v)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

fn column_index(word: &str) -> Option<usize> {
    let digits = word.strip_prefix('c')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        let t = &self.toks[self.at];
        Pos { line: t.line, column: t.column }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::Parse { line: p.line, column: p.column, message: message.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Quoted(q) => format!("'{q}'"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.fail(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Tok::Word(x) if x == w) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, w: &str) -> Result<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.fail(format!("expected `{w}`, found {}", self.describe()))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.fail(format!("unexpected {}", self.describe()))
        }
    }

    fn name(&mut self) -> Result<Name> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Word(text) => {
                self.at += 1;
                Ok(Name { text, pos })
            }
            _ => self.fail(format!("expected a name, found {}", self.describe())),
        }
    }

    /// A word or quoted string, used for labels.
    fn label(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Word(w) | Tok::Quoted(w) => {
                self.at += 1;
                Ok(w)
            }
            _ => self.fail(format!("expected a label, found {}", self.describe())),
        }
    }

    fn literal(&mut self) -> Result<Literal> {
        match self.peek().clone() {
            Tok::Word(w) if w == "null" => {
                self.at += 1;
                Ok(Literal::Null)
            }
            Tok::Word(w) | Tok::Quoted(w) => {
                self.at += 1;
                Ok(Literal::Name(w))
            }
            _ => self.fail(format!("expected a value, found {}", self.describe())),
        }
    }

    fn column(&mut self) -> Result<usize> {
        if let Tok::Word(w) = self.peek() {
            if let Some(c) = column_index(w) {
                self.at += 1;
                return Ok(c);
            }
        }
        self.fail(format!("expected a column such as `c0`, found {}", self.describe()))
    }

    fn comma_list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat_sym(",") {
            out.push(item(self)?);
        }
        Ok(out)
    }

    /// `open item, item close`, possibly empty.
    fn delimited<T>(
        &mut self,
        open: &str,
        close: &str,
        item: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<Vec<T>> {
        self.sym(open)?;
        if self.eat_sym(close) {
            return Ok(Vec::new());
        }
        let out = self.comma_list(item)?;
        self.sym(close)?;
        Ok(out)
    }

    fn columns_in_parens(&mut self) -> Result<Vec<usize>> {
        self.sym("(")?;
        let cols = self.comma_list(Self::column)?;
        self.sym(")")?;
        Ok(cols)
    }

    fn row(&mut self) -> Result<Vec<Literal>> {
        self.sym("(")?;
        let vals = self.comma_list(Self::literal)?;
        self.sym(")")?;
        Ok(vals)
    }

    fn decl(&mut self) -> Result<Decl> {
        let word = match self.peek() {
            Tok::Word(w) => w.clone(),
            _ => return self.fail(format!("expected a declaration, found {}", self.describe())),
        };
        match word.as_str() {
            "domain" => {
                self.at += 1;
                let name = self.name()?;
                self.sym("=")?;
                let values = self.delimited("{", "}", Self::literal)?;
                Ok(Decl::Domain(name, values))
            }
            "table" => {
                self.at += 1;
                let name = self.name()?;
                let cols = self.delimited("(", ")", Self::name)?;
                let mut clauses = Vec::new();
                loop {
                    if self.eat_word("key") {
                        clauses.push(TableClause::Key(self.columns_in_parens()?));
                    } else if self.eat_word("fk") {
                        let local = self.column()?;
                        self.sym("->")?;
                        let table = self.name()?;
                        self.sym(".")?;
                        clauses.push(TableClause::Fk(local, table, self.column()?));
                    } else if self.eat_word("notallnull") {
                        clauses.push(TableClause::NotAllNull(self.columns_in_parens()?));
                    } else {
                        break;
                    }
                }
                Ok(Decl::Table(name, cols, clauses))
            }
            "state" => {
                self.at += 1;
                let name = self.name()?;
                self.sym("=")?;
                let tables = self.delimited("{", "}", |p| {
                    let t = p.name()?;
                    p.sym(":")?;
                    Ok((t, p.delimited("{", "}", Self::row)?))
                })?;
                Ok(Decl::State(name, tables))
            }
            "view" => {
                self.at += 1;
                let name = self.name()?;
                self.sym("=")?;
                Ok(Decl::View(name, self.view()?))
            }
            "update" => {
                self.at += 1;
                let name = self.name()?;
                self.sym("=")?;
                let tables = if matches!(self.peek(), Tok::Sym("[")) {
                    self.delimited("[", "]", Self::edits)?
                } else {
                    vec![self.edits()?]
                };
                Ok(Decl::Update(name, tables))
            }
            "strategy" => {
                self.at += 1;
                let name = self.name()?;
                self.sym("=")?;
                Ok(Decl::Strategy(name, self.strategy()?))
            }
            other => self.fail(format!("unknown declaration `{other}`")),
        }
    }

    fn edits(&mut self) -> Result<Vec<RowEdit>> {
        self.delimited("{", "}", |p| {
            let add = if p.eat_sym("+") {
                true
            } else if p.eat_sym("-") {
                false
            } else {
                return p.fail(format!("expected `+` or `-`, found {}", p.describe()));
            };
            Ok(RowEdit { add, values: p.row()? })
        })
    }

    fn strategy(&mut self) -> Result<Strategy> {
        let pos = self.pos();
        let word = self.name()?.text;
        Ok(match word.as_str() {
            "identity" => Strategy::Identity,
            "selection" => Strategy::Selection,
            "projection" => Strategy::Projection,
            "hierjoin" => Strategy::HierJoin,
            "fkjoin" => Strategy::FkJoin,
            "combined" => Strategy::Combined,
            "union" => {
                let policy = self.name()?.text;
                Strategy::Union(match policy.as_str() {
                    "both" => InsertPolicy::Both,
                    "left" => InsertPolicy::Left,
                    "right" => InsertPolicy::Right,
                    _ => {
                        self.at -= 1;
                        return self.fail(format!("unknown insert policy `{policy}`"));
                    }
                })
            }
            _ => {
                return Err(Error::Parse {
                    line: pos.line,
                    column: pos.column,
                    message: format!("unknown strategy `{word}`"),
                })
            }
        })
    }

    fn pairs(&mut self) -> Result<Vec<(usize, usize)>> {
        self.keyword("on")?;
        self.comma_list(|p| {
            let a = p.column()?;
            p.sym("=")?;
            Ok((a, p.column()?))
        })
    }

    fn named(&mut self, key: &str) -> Result<Name> {
        self.keyword(key)?;
        self.sym("=")?;
        self.name()
    }

    pub(crate) fn view(&mut self) -> Result<RawView> {
        let word = match self.peek() {
            Tok::Word(w) => w.clone(),
            _ => return self.fail(format!("expected a view, found {}", self.describe())),
        };
        self.at += 1;
        Ok(match word.as_str() {
            "select" => {
                let t = self.name()?;
                self.keyword("where")?;
                RawView::Select(t, self.predicate()?)
            }
            "project" => {
                let t = self.name()?;
                self.keyword("cols")?;
                let cols = self.comma_list(Self::column)?;
                let drop = if self.eat_word("dropnull") { self.comma_list(Self::column)? } else { Vec::new() };
                RawView::Project(t, cols, drop)
            }
            "union" => RawView::Union(self.name()?, self.name()?),
            "hierjoin" | "childless" => {
                let parent = self.named("parent")?;
                let child = self.named("child")?;
                let on = self.pairs()?;
                if word == "hierjoin" {
                    RawView::HierJoin(parent, child, on)
                } else {
                    RawView::Childless(parent, child, on)
                }
            }
            "fkjoin" => {
                let local = self.named("local")?;
                let foreign = self.named("foreign")?;
                RawView::FkJoin(local, foreign, self.pairs()?)
            }
            "join" => {
                let l = self.name()?;
                let r = self.name()?;
                self.keyword("on")?;
                let conds = self.comma_list(|p| {
                    let a = p.column()?;
                    let op = p.compare_op()?;
                    Ok((a, op, p.column()?))
                })?;
                RawView::Join(l, r, conds)
            }
            "table" => RawView::Table(self.name()?),
            "product" => {
                self.sym("(")?;
                let a = self.view()?;
                self.sym(")")?;
                self.sym("(")?;
                let b = self.view()?;
                self.sym(")")?;
                RawView::Product(Box::new(a), Box::new(b))
            }
            "tabulated" => RawView::Tabulated(self.delimited("{", "}", |p| {
                let s = p.name()?;
                p.sym("->")?;
                Ok((s, p.label()?))
            })?),
            "zero" => RawView::Zero,
            "one" => RawView::One,
            other => {
                self.at -= 1;
                return self.fail(format!("unknown view operator `{other}`"));
            }
        })
    }

    fn compare_op(&mut self) -> Result<CompareOp> {
        let op = match self.peek() {
            Tok::Sym("=") => CompareOp::Eq,
            Tok::Sym("!=") => CompareOp::Ne,
            Tok::Sym("<") => CompareOp::Lt,
            Tok::Sym("<=") => CompareOp::Le,
            Tok::Sym(">") => CompareOp::Gt,
            Tok::Sym(">=") => CompareOp::Ge,
            _ => return self.fail(format!("expected a comparison, found {}", self.describe())),
        };
        self.at += 1;
        Ok(op)
    }

    // or := and ('or' and)* ; and := unary ('and' unary)* ; unary := 'not' unary | atom
    fn predicate(&mut self) -> Result<RawPred> {
        let mut p = self.conjunction()?;
        while self.eat_word("or") {
            p = RawPred::Or(Box::new(p), Box::new(self.conjunction()?));
        }
        Ok(p)
    }

    fn conjunction(&mut self) -> Result<RawPred> {
        let mut p = self.unary()?;
        while self.eat_word("and") {
            p = RawPred::And(Box::new(p), Box::new(self.unary()?));
        }
        Ok(p)
    }

    fn unary(&mut self) -> Result<RawPred> {
        if self.eat_word("not") {
            return Ok(RawPred::Not(Box::new(self.unary()?)));
        }
        if self.eat_sym("(") {
            let p = self.predicate()?;
            self.sym(")")?;
            return Ok(p);
        }
        if self.eat_word("true") {
            return Ok(RawPred::True);
        }
        if self.eat_word("isnull") {
            return Ok(RawPred::IsNull(self.column()?));
        }
        let col = self.column()?;
        let op = self.compare_op()?;
        let rhs = match self.peek() {
            Tok::Word(w) if column_index(w).is_some() => RawOperand::Column(self.column()?),
            _ => RawOperand::Value(self.literal()?),
        };
        Ok(RawPred::Compare(col, op, rhs))
    }
}
