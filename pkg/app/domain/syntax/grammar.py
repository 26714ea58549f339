"""Lark grammars for hpGCL programs, guards and arithmetic.

The arithmetic/guard fragment and the terminal block are shared with the
expectation grammar in ``app.domain.expectation.parser``.
"""

ARITH_GUARD_RULES = r"""
?arith: term
      | arith "+" term               -> add
      | arith "-" term               -> sub
?term: factor
     | term "*" factor               -> mul
?factor: INT                         -> int_lit
       | "-" INT                     -> neg_int
       | NAME                        -> var
       | "(" arith ")"

?guard: gdisj
?gdisj: gconj
      | gdisj "||" gconj             -> g_or
?gconj: gneg
      | gconj "&&" gneg              -> g_and
?gneg: "!" gneg                      -> g_not
     | gatom
?gatom: "true"                       -> g_true
      | "false"                      -> g_false
      | arith CMP arith              -> g_compare
      | "(" guard ")"
"""

TERMINALS = r"""
CMP: "!=" | "<=" | ">=" | "=" | "<" | ">"
NAME: /[A-Za-z_][A-Za-z0-9_]*/
INT: /[0-9]+/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

PROGRAM_RULES = r"""
program: stmt (";" stmt)* ";"?

?stmt: "skip"                                       -> skip
     | NAME ":=" arith                              -> assign
     | NAME ":=" "new" "(" arith ("," arith)* ")"   -> alloc
     | NAME ":=" "<" arith ">"                      -> lookup
     | NAME ":=" "uniform" "(" arith "," arith ")"  -> uniform
     | "<" arith ">" ":=" arith                     -> mutate
     | "free" "(" arith ")"                         -> free
     | "if" "(" guard ")" block "else" block        -> ite
     | "if" "(" guard ")" block                     -> if_then
     | "while" "(" guard ")" block                  -> while_loop
     | block "[" prob "]" block                     -> pchoice
     | block

block: "{" program "}"

prob: INT "/" INT                                   -> prob_ratio
    | DECIMAL                                       -> prob_decimal
    | INT                                           -> prob_int

DECIMAL: /[0-9]+\.[0-9]+/
"""

PROGRAM_GRAMMAR = PROGRAM_RULES + ARITH_GUARD_RULES + TERMINALS
