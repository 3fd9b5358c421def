//! Recursive-descent parser producing block-extracted syntax trees.
//!
//! Consecutive assignments fold into one straight-line block at parse time,
//! so the parsed tree's leaves are exactly the program's atomic blocks.

use super::ast::*;
use super::lex::{lex, line_col, Tok, Token};
use super::ParseError;

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let mut functions = Vec::new();
    while !p.at_end() {
        functions.push(p.function()?);
    }
    if functions.is_empty() {
        return Err(p.error_here("empty program"));
    }
    Ok(Program { functions })
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn span_here(&self) -> Span {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| t.span)
            .unwrap_or_default()
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: Tok, what: &str) -> Result<Span, ParseError> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.bump().span),
            _ => Err(self.error_here(&format!("expected {}", what))),
        }
    }

    fn eat_semis(&mut self) {
        while self.peek() == Some(&Tok::Semi) {
            self.bump();
        }
    }

    fn error_here(&self, msg: &str) -> ParseError {
        let offset = self.span_here().lo;
        let (line, col) = line_col(self.src, offset);
        ParseError { line, col, message: msg.to_string() }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let t = self.bump();
                if let Tok::Ident(name) = t.tok {
                    Ok((name, t.span))
                } else {
                    unreachable!()
                }
            }
            _ => Err(self.error_here(&format!("expected {}", what))),
        }
    }

    fn function(&mut self) -> Result<Function, ParseError> {
        let (name, name_span) = self.ident("function name")?;
        self.eat(Tok::LParen, "'('")?;
        let (loc_param, _) = self.ident("Loc parameter")?;
        let mut int_params = Vec::new();
        while self.peek() == Some(&Tok::Comma) {
            self.bump();
            let (p, _) = self.ident("Int parameter")?;
            int_params.push(p);
        }
        self.eat(Tok::RParen, "')'")?;
        self.eat(Tok::LBrace, "'{'")?;
        let mut arity = ReturnArity::default();
        let body = self.stmt_seq(&mut arity)?;
        let close = self.eat(Tok::RBrace, "'}'")?;
        if let Some((line, col, msg)) = arity.conflict {
            return Err(ParseError { line, col, message: msg });
        }
        Ok(Function {
            name,
            loc_param,
            int_params,
            body,
            return_arity: arity.arity.unwrap_or(0),
            span: name_span.join(close),
        })
    }

    /// Statements until the closing brace (or `||` inside a parallel group).
    /// Adjacent assignments accumulate into a single straight block.
    fn stmt_seq(&mut self, arity: &mut ReturnArity) -> Result<Stmt, ParseError> {
        let mut stmts: Vec<Stmt> = Vec::new();
        let mut run: Vec<Assgn> = Vec::new();
        loop {
            self.eat_semis();
            match self.peek() {
                None | Some(Tok::RBrace) | Some(Tok::ParSep) => break,
                Some(Tok::KwIf) => {
                    flush(&mut stmts, &mut run);
                    stmts.push(self.if_stmt(arity)?);
                }
                Some(Tok::LBrace) => {
                    flush(&mut stmts, &mut run);
                    stmts.push(self.par_stmt(arity)?);
                }
                Some(Tok::KwReturn) => {
                    self.return_stmt(arity, &mut run)?;
                }
                _ => {
                    // assignment or call, both starting with an lvalue list
                    self.assign_or_call(arity, &mut stmts, &mut run)?;
                }
            }
        }
        flush(&mut stmts, &mut run);
        Ok(Stmt::seq(stmts))
    }

    fn if_stmt(&mut self, arity: &mut ReturnArity) -> Result<Stmt, ParseError> {
        self.eat(Tok::KwIf, "'if'")?;
        let open = self.eat(Tok::LParen, "'('")?;
        let cond = self.bexpr()?;
        let close = self.eat(Tok::RParen, "')'")?;
        self.eat(Tok::LBrace, "'{'")?;
        let then = self.stmt_seq(arity)?;
        self.eat(Tok::RBrace, "'}'")?;
        let els = if self.peek() == Some(&Tok::KwElse) {
            self.bump();
            if self.peek() == Some(&Tok::KwIf) {
                self.if_stmt(arity)?
            } else {
                self.eat(Tok::LBrace, "'{'")?;
                let e = self.stmt_seq(arity)?;
                self.eat(Tok::RBrace, "'}'")?;
                e
            }
        } else {
            Stmt::Empty
        };
        Ok(Stmt::If {
            cond,
            cond_span: SpanEq(open.join(close)),
            then: Box::new(then),
            els: Box::new(els),
        })
    }

    fn par_stmt(&mut self, arity: &mut ReturnArity) -> Result<Stmt, ParseError> {
        self.eat(Tok::LBrace, "'{'")?;
        let left = self.stmt_seq(arity)?;
        self.eat(Tok::ParSep, "'||'")?;
        let mut branches = vec![left, self.stmt_seq(arity)?];
        while self.peek() == Some(&Tok::ParSep) {
            self.bump();
            branches.push(self.stmt_seq(arity)?);
        }
        self.eat(Tok::RBrace, "'}'")?;
        // nest extra branches to the right; parallelism is binary in the tree
        let mut it = branches.into_iter().rev();
        let mut out = it.next().unwrap();
        for b in it {
            out = Stmt::Par(Box::new(b), Box::new(out));
        }
        Ok(out)
    }

    fn return_stmt(
        &mut self,
        arity: &mut ReturnArity,
        run: &mut Vec<Assgn>,
    ) -> Result<(), ParseError> {
        let kw = self.eat(Tok::KwReturn, "'return'")?;
        let mut exprs = Vec::new();
        if self.starts_expr() {
            let parenthesized = self.peek() == Some(&Tok::LParen) && self.tuple_ahead();
            if parenthesized {
                self.bump();
                exprs.push(self.aexpr()?);
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    exprs.push(self.aexpr()?);
                }
                self.eat(Tok::RParen, "')'")?;
            } else {
                exprs.push(self.aexpr()?);
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    exprs.push(self.aexpr()?);
                }
            }
        }
        let end = self.toks.get(self.pos.wrapping_sub(1)).map(|t| t.span).unwrap_or(kw);
        arity.record(self.src, kw.lo, exprs.len());
        for (k, e) in exprs.into_iter().enumerate() {
            run.push(Assgn { lhs: Lhs::Ret(k), rhs: e, span: kw.join(end) });
        }
        Ok(())
    }

    /// True when a '(' begins a parenthesized tuple `(a, b)` rather than a
    /// parenthesized arithmetic expression.
    fn tuple_ahead(&self) -> bool {
        let mut depth = 0usize;
        for t in &self.toks[self.pos..] {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    if depth == 1 {
                        return false;
                    }
                    depth -= 1;
                }
                Tok::Comma if depth == 1 => return true,
                Tok::Semi | Tok::LBrace | Tok::RBrace => return false,
                _ => {}
            }
        }
        false
    }

    fn starts_expr(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen) | Some(Tok::Minus)
        )
    }

    fn assign_or_call(
        &mut self,
        _arity: &mut ReturnArity,
        stmts: &mut Vec<Stmt>,
        run: &mut Vec<Assgn>,
    ) -> Result<(), ParseError> {
        let start = self.span_here();
        // bare call statement: `F(n.l, e)` with no bound results
        if matches!(self.peek(), Some(Tok::Ident(_))) && self.peek2() == Some(&Tok::LParen) {
            let (callee, _) = self.ident("callee")?;
            self.eat(Tok::LParen, "'('")?;
            let loc_arg = self.lexpr()?;
            let mut int_args = Vec::new();
            while self.peek() == Some(&Tok::Comma) {
                self.bump();
                int_args.push(self.aexpr()?);
            }
            let close = self.eat(Tok::RParen, "')'")?;
            flush(stmts, run);
            stmts.push(Stmt::Block(Block::Call {
                results: Vec::new(),
                callee,
                loc_arg,
                int_args,
                span: start.join(close),
            }));
            return Ok(());
        }
        // lvalue list: `a, b = …` or `(a, b) = …` or a single lvalue
        let mut names: Vec<(String, Vec<Dir>, Option<String>)> = Vec::new();
        let parenthesized = self.peek() == Some(&Tok::LParen);
        if parenthesized {
            self.bump();
        }
        loop {
            let (base, _) = self.ident("assignment target")?;
            let (steps, field) = self.path_suffix()?;
            names.push((base, steps, field));
            if self.peek() == Some(&Tok::Comma) {
                self.bump();
            } else {
                break;
            }
        }
        if parenthesized {
            self.eat(Tok::RParen, "')'")?;
        }
        self.eat(Tok::Assign, "'='")?;

        // call if the RHS is `Ident(`
        if matches!(self.peek(), Some(Tok::Ident(_))) && self.peek2() == Some(&Tok::LParen) {
            let (callee, _) = self.ident("callee")?;
            self.eat(Tok::LParen, "'('")?;
            let loc_arg = self.lexpr()?;
            let mut int_args = Vec::new();
            while self.peek() == Some(&Tok::Comma) {
                self.bump();
                int_args.push(self.aexpr()?);
            }
            let close = self.eat(Tok::RParen, "')'")?;
            let mut results = Vec::new();
            for (base, steps, field) in names {
                if !steps.is_empty() || field.is_some() {
                    return Err(self.error_here("call results must be plain variables"));
                }
                results.push(base);
            }
            flush(stmts, run);
            stmts.push(Stmt::Block(Block::Call {
                results,
                callee,
                loc_arg,
                int_args,
                span: start.join(close),
            }));
            return Ok(());
        }

        if names.len() != 1 {
            return Err(self.error_here("tuple assignment is only allowed for call results"));
        }
        let (base, steps, field) = names.into_iter().next().unwrap();
        let rhs = self.aexpr()?;
        let end = self.toks.get(self.pos - 1).map(|t| t.span).unwrap_or(start);
        let lhs = match field {
            Some(f) => Lhs::Field(LExpr { var: base, steps }, f),
            None if steps.is_empty() => Lhs::Var(base),
            None => {
                // `n.l = …` — a pointer write; keep it as a field write so
                // validation can report tree mutation with a span.
                let mut steps = steps;
                let last = steps.pop().unwrap();
                Lhs::Field(LExpr { var: base, steps }, last.field_name().to_string())
            }
        };
        run.push(Assgn { lhs, rhs, span: start.join(end) });
        Ok(())
    }

    /// Parses `.l.r.f…` after a base identifier: pointer steps followed by an
    /// optional Int field name.
    fn path_suffix(&mut self) -> Result<(Vec<Dir>, Option<String>), ParseError> {
        let mut steps = Vec::new();
        let mut field = None;
        while self.peek() == Some(&Tok::Dot) {
            self.bump();
            let (name, _) = self.ident("field name")?;
            match name.as_str() {
                "l" => steps.push(Dir::Left),
                "r" => steps.push(Dir::Right),
                _ => {
                    field = Some(name);
                    break;
                }
            }
        }
        Ok((steps, field))
    }

    fn lexpr(&mut self) -> Result<LExpr, ParseError> {
        if self.peek() == Some(&Tok::KwNil) {
            return Err(self.error_here("nil is not a location expression"));
        }
        let (base, _) = self.ident("location expression")?;
        let (steps, field) = self.path_suffix()?;
        if field.is_some() {
            return Err(self.error_here("expected a location, found a field read"));
        }
        Ok(LExpr { var: base, steps })
    }

    fn aexpr(&mut self) -> Result<AExpr, ParseError> {
        let mut lhs = self.aterm()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.aterm()?;
                    lhs = AExpr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.aterm()?;
                    lhs = AExpr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn aterm(&mut self) -> Result<AExpr, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.bump();
                if let Tok::Int(v) = t.tok {
                    Ok(AExpr::Const(v))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::Minus) => {
                self.bump();
                let inner = self.aterm()?;
                Ok(AExpr::Sub(Box::new(AExpr::Const(0)), Box::new(inner)))
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.aexpr()?;
                self.eat(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(_)) => {
                let (base, _) = self.ident("identifier")?;
                let (steps, field) = self.path_suffix()?;
                match field {
                    Some(f) => Ok(AExpr::Field(LExpr { var: base, steps }, f)),
                    None if steps.is_empty() => Ok(AExpr::Var(base)),
                    None => {
                        // pointer read in Int position; validation rejects it
                        let mut steps = steps;
                        let last = steps.pop().unwrap();
                        Ok(AExpr::Field(
                            LExpr { var: base, steps },
                            last.field_name().to_string(),
                        ))
                    }
                }
            }
            _ => Err(self.error_here("expected an integer expression")),
        }
    }

    fn bexpr(&mut self) -> Result<BExpr, ParseError> {
        let mut lhs = self.bterm()?;
        while self.peek() == Some(&Tok::AndAnd) {
            self.bump();
            let rhs = self.bterm()?;
            lhs = BExpr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn bterm(&mut self) -> Result<BExpr, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                let inner = self.bterm()?;
                Ok(BExpr::Not(Box::new(inner)))
            }
            Some(Tok::KwTrue) => {
                self.bump();
                Ok(BExpr::True)
            }
            Some(Tok::LParen) if self.bool_paren_ahead() => {
                self.bump();
                let inner = self.bexpr()?;
                self.eat(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => self.comparison(),
        }
    }

    /// Distinguishes `(a && b)`-style boolean grouping from an arithmetic
    /// parenthesis beginning a comparison like `(a + b) > 0`.
    fn bool_paren_ahead(&self) -> bool {
        let mut depth = 0usize;
        for t in &self.toks[self.pos..] {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                Tok::AndAnd | Tok::EqEq | Tok::BangEq | Tok::KwNil | Tok::Bang
                    if depth == 1 =>
                {
                    return true;
                }
                Tok::Lt | Tok::Gt | Tok::Le | Tok::Ge if depth == 1 => return true,
                _ => {}
            }
        }
        false
    }

    /// `le == nil`, `le != nil`, or an arithmetic comparison desugared to
    /// the `> 0` form.
    fn comparison(&mut self) -> Result<BExpr, ParseError> {
        let save = self.pos;
        // try a nil test first: Ident path (== | !=) nil
        if matches!(self.peek(), Some(Tok::Ident(_))) {
            if let Ok(le) = self.lexpr() {
                match self.peek() {
                    Some(Tok::EqEq) if self.peek2() == Some(&Tok::KwNil) => {
                        self.bump();
                        self.bump();
                        return Ok(BExpr::NilTest(le));
                    }
                    Some(Tok::BangEq) if self.peek2() == Some(&Tok::KwNil) => {
                        self.bump();
                        self.bump();
                        return Ok(BExpr::Not(Box::new(BExpr::NilTest(le))));
                    }
                    _ => {}
                }
            }
            self.pos = save;
        }
        let lhs = self.aexpr()?;
        let op = match self.peek() {
            Some(Tok::Gt) => Tok::Gt,
            Some(Tok::Lt) => Tok::Lt,
            Some(Tok::Ge) => Tok::Ge,
            Some(Tok::Le) => Tok::Le,
            _ => return Err(self.error_here("expected a comparison operator")),
        };
        self.bump();
        let rhs = self.aexpr()?;
        let diff = |a: AExpr, b: AExpr| {
            if b == AExpr::Const(0) {
                a
            } else {
                AExpr::Sub(Box::new(a), Box::new(b))
            }
        };
        let plus1 = |e: AExpr| AExpr::Add(Box::new(e), Box::new(AExpr::Const(1)));
        Ok(BExpr::Positive(match op {
            Tok::Gt => diff(lhs, rhs),
            Tok::Lt => diff(rhs, lhs),
            Tok::Ge => plus1(diff(lhs, rhs)),
            Tok::Le => plus1(diff(rhs, lhs)),
            _ => unreachable!(),
        }))
    }
}

#[derive(Default)]
struct ReturnArity {
    arity: Option<usize>,
    first_offset: u32,
    conflict: Option<(usize, usize, String)>,
}

impl ReturnArity {
    fn record(&mut self, src: &str, offset: u32, n: usize) {
        match self.arity {
            None => {
                self.arity = Some(n);
                self.first_offset = offset;
            }
            Some(prev) if prev != n && self.conflict.is_none() => {
                let (line, col) = line_col(src, offset);
                self.conflict = Some((
                    line,
                    col,
                    format!("return arity {} conflicts with earlier return of arity {}", n, prev),
                ));
            }
            _ => {}
        }
    }
}

fn flush(stmts: &mut Vec<Stmt>, run: &mut Vec<Assgn>) {
    if !run.is_empty() {
        stmts.push(Stmt::Block(Block::Straight(std::mem::take(run))));
    }
}
