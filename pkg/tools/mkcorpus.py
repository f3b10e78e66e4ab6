"""Write the conformance corpus scripts into tests/corpus.

Expected output for ordinary tests comes from a reference shell via
tools/regen_corpus.py.  The tests in DIV are deliberate divergences and
carry hand-written fixtures.
"""

import os, sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "corpus")
S = "# symbolic\n"
T = {}


def t(name, body, sym=False):
    assert name not in T, name
    T[name] = (S if sym else "") + body.strip("\n") + "\n"


# ------------------------------------------------------------------ builtin
t("builtin.colon", ": ignored args; echo $?\n: > /dev/null; echo ok", True)
t("builtin.true-false", "true; echo $?\nfalse; echo $?\n! false; echo $?", True)
t("builtin.echo-basic", 'echo a b  c\necho "a  b"\necho\necho "" x\necho -n no-newline; echo', True)
t("builtin.echo-dashdash", "echo -- -n\necho -n -- x; echo", True)
t("builtin.printf-strings", "printf '%s\\n' one two three\nprintf '%s|' a b c; echo\nprintf '[%5s][%-5s]\\n' ab cd\nprintf '%.2s\\n' abcdef", True)
t("builtin.printf-ints", "printf '%d %i\\n' 42 -7\nprintf '%05d|%-4d|%+d\\n' 42 7 5\nprintf '%x %X %o\\n' 255 255 8\nprintf '%u\\n' 42\nprintf '%.3d\\n' 5", True)
t("builtin.printf-numeric-forms", "printf '%d\\n' 0x10 010 \"'A\"\nprintf '%#x %#o\\n' 255 8", True)
t("builtin.printf-reuse", "printf '%s-%s\\n' a b c d e\nprintf '%s %s\\n' only", True)
t("builtin.printf-escapes", "printf 'tab\\there\\n'\nprintf '\\101\\102\\n'\nprintf '%%literal\\n'\nprintf 'no newline'", True)
t("builtin.printf-b", "printf '%b\\n' 'a\\tb' 'c\\\\d'\nprintf '%b' 'one\\ntwo\\n'\nprintf '%b\\n' '\\0101'", True)
t("builtin.printf-char-width", "printf '%c%c\\n' A BC\nprintf '%*d|\\n' 4 7\nprintf '%5.1s|\\n' abc", True)
t("builtin.printf-bad-number", "printf '%d\\n' abc 2>/dev/null; echo $?\nprintf '%d\\n' 12abc 2>/dev/null; echo $?", True)
t("builtin.test-strings", '[ -z "" ]; echo $?\n[ -n "" ]; echo $?\n[ abc = abc ]; echo $?\n[ abc != abc ]; echo $?\ntest abc \\< abd; echo $?\n[ x ]; echo $?\n[ "" ]; echo $?', True)
t("builtin.test-ints", "[ 1 -lt 2 ]; echo $?\n[ 3 -ne 3 ]; echo $?\n[ 3 -ge 3 ]; echo $?\n[ 2 -le 1 ]; echo $?\n[ 10 -gt 9 ]; echo $?\n[ -5 -eq -5 ]; echo $?", True)
t("builtin.test-connectives", '[ 1 -lt 2 -a 3 -gt 2 ]; echo $?\n[ a = b -o b = b ]; echo $?\n[ ! a = a ]; echo $?\n[ \\( a = a \\) -a \\( b = b \\) ]; echo $?\n[ ! ]; echo $?\n[ ! "" ]; echo $?', True)
t("builtin.test-argcounts", "[ ]; echo $?\n[ -n ]; echo $?\n[ -f ]; echo $?\n[ = ]; echo $?\n[ \"(\" = \"(\" ]; echo $?", True)
t("builtin.test-errors", "[ 1 -eq a ] 2>/dev/null; echo $?\n[ a 2>/dev/null; echo $?\n[ 1 -lt ] 2>/dev/null; echo $?", True)
t("builtin.test-files", ": > f; mkdir d\n[ -f f ]; echo $?\n[ -d d ]; echo $?\n[ -e nosuch ]; echo $?\n[ -s f ]; echo $?\necho x > g; [ -s g ]; echo $?\n[ -r f ]; echo $?\n[ -L f ]; echo $?")
t("builtin.test-files-sym", ": > f\necho x > g\n[ -f f ]; echo $?\n[ -e nosuch ]; echo $?\n[ -s f ]; echo $?\n[ -s g ]; echo $?", True)
t("builtin.read-basic", "read x y <<EOF\nhello world again\nEOF\necho \"$x|$y\"\nread a b c <<EOF\n1 2\nEOF\necho \"[$a][$b][$c]\"", True)
t("builtin.read-ifs", "IFS=: read a b <<EOF\nx:y:z\nEOF\necho \"$a|$b\"\nIFS=, read a b <<EOF\np,q,\nEOF\necho \"[$b]\"", True)
t("builtin.read-whitespace", "read a <<EOF\n  spaced  \nEOF\necho \"[$a]\"\nIFS= read a <<EOF\n  spaced\nEOF\necho \"[$a]\"", True)
t("builtin.read-backslash", "read a <<'EOF'\ncont\\\ninued\nEOF\necho $a\nread -r a <<'EOF'\nraw\\n\nEOF\nprintf '%s\\n' \"$a\" | wc -c")
t("builtin.read-backslash-sym", "read a <<'EOF'\ncont\\\ninued\nEOF\necho $a\nread a b <<'EOF'\nx\\ y z\nEOF\necho \"[$a][$b]\"", True)
t("builtin.read-eof", "printf 'partial' | { read x; echo \"$? $x\"; }\n: | { read x; echo \"$? [$x]\"; }", True)
t("builtin.read-loop", "while read line; do echo \"got $line\"; done <<EOF\nl1\nl2\nl3\nEOF", True)
t("builtin.read-from-pipe", "printf 'a\\nb\\n' | while read l; do echo \"<$l>\"; done\necho done", True)
t("builtin.getopts-sequence", "getopts \"ab:c:\" opt -ab hi -c hello; echo $? $opt $OPTIND\ngetopts \"ab:c:\" opt -ab hi -c hello; echo $? $opt $OPTARG $OPTIND\ngetopts \"ab:c:\" opt -ab hi -c hello; echo $? $opt $OPTARG $OPTIND\ngetopts \"ab:c:\" opt -ab hi -c hello; echo $? $opt $OPTIND", True)
t("builtin.getopts-loop", "set -- -a -b arg rest\nwhile getopts ab o; do echo $o; done\nshift $((OPTIND-1)); echo \"$@\"", True)
t("builtin.getopts-missing-arg", "getopts ab: o -b 2>/dev/null; echo $? $o\nOPTIND=1\ngetopts :ab: o -b; echo $? $o $OPTARG", True)
t("builtin.getopts-illegal", "getopts ab o -c 2>/dev/null; echo $? $o $OPTIND\nOPTIND=1; getopts :ab o -c; echo $? $o $OPTARG", True)
t("builtin.getopts-args", "while getopts \"xy:\" o -x -y val rest; do echo \"$o ${OPTARG-}\"; done; echo $OPTIND", True)
t("builtin.shift", "set -- a b c d e\nshift; echo $@\nshift 2; echo $# $1\nshift 5 2>/dev/null; echo $?", True)
t("builtin.set-positional", "set -- a \"b c\" d\necho $#\nfor i; do echo \"[$i]\"; done\nset --\necho $#", True)
t("builtin.set-options", "set -f; echo $-\nset +f -u; echo $-\nset +u; echo \"[$-]\"", True)
t("builtin.set-o-query", "set -o errexit\nset -o | grep errexit\nset +o errexit\nset -o | grep errexit")
t("builtin.set-noglob", ": > aa\nset -f; echo a*\nset +f; echo a*", True)
t("builtin.export", "export E=exported\n$TEST_SHELL -c 'echo $E'\nF=notexported\n$TEST_SHELL -c 'echo \"[$F]\"'")
t("builtin.export-p", "export z='a'\\''b'\nexport -p | grep ' z='")
t("builtin.readonly", "readonly r=1\nr=2 2>/dev/null || echo failed\necho $r\n(unset r) 2>/dev/null; echo $?", True)
t("builtin.readonly-assign-exits", "readonly r=1\nr=2\necho notreached", True)
t("builtin.unset", "x=1 y=2 z=3; unset x y; echo ${x-u}${y-u}$z\nf() { echo f; }\nunset -f f; f 2>/dev/null; echo $?\nunset -v z; echo ${z-gone}", True)
t("builtin.local", "x=1\nf() { local x=2; echo $x; g; }\ng() { echo g:$x; }\nf; echo $x", True)
t("builtin.local-dynamic-write", "f() { local a=1; g; echo $a; }\ng() { a=2; }\nf; echo \"[${a-unset}]\"", True)
t("builtin.local-loopvar", "f() { local i; for i in 1 2; do :; done; echo $i; }\ni=z; f; echo $i", True)
t("builtin.eval", "eval 'x=1; echo $x'\neval \"echo \\$x\"\nx='echo hi; echo there'; eval \"$x\"\neval; echo $?\neval 'false'; echo $?", True)
t("builtin.eval-defines", "eval 'f() { echo evalf; }'\nf\neval \"echo \\\"a   b\\\"\"", True)
t("builtin.eval-exit", "eval 'exit 6'\necho no", True)
t("builtin.dot", "echo 'echo sourced $#; y=fromdot' > inc.sh\n. ./inc.sh a b\necho $y\necho 'echo dotted; return 3; echo no' > r.sh\n. ./r.sh; echo $?", True)
t("builtin.dot-missing", ". ./nonexistent-file 2>/dev/null\necho notreached", True)
t("builtin.exec-redirect", "exec 3>out; echo viafd >&3; exec 3>&-\nread l < out; echo $l", True)
t("builtin.exec-cmd", "exec echo replaced\necho no")
t("builtin.exec-status", "(exec false); echo $?\n(exec true); echo $?")
t("builtin.exit-status", "(exit 3); echo $?\n(exit 300); echo $?\n(exit); echo $?\nfalse; (exit); echo $?", True)
t("builtin.exit-in-func", "f() { exit 4; }\nf\necho no", True)
t("builtin.exit-bad", "exit foo\necho no", True)
t("builtin.return", "f() { return 4; }; f; echo $?\ng() { false; return; }; g; echo $?\nh() { for i in 1 2; do return 5; done; }; h; echo $?", True)
t("builtin.break-continue", "for i in 1 2 3; do for j in a b; do [ $j = b ] && break 2; echo $i$j; done; done\nfor i in 1 2 3; do [ $i = 2 ] && continue; echo $i; done\nwhile :; do while :; do break 2; done; echo no; done; echo out", True)
t("builtin.break-toplevel", "break\necho continues\ncontinue\necho still", True)
t("builtin.trap-exit", "trap 'echo exiting $?' EXIT\necho body\nfalse", True)
t("builtin.trap-exit-status", "trap 'echo bye' EXIT\nexit 3", True)
t("builtin.trap-exit-override", "trap 'exit 9' EXIT\nexit 2", True)
t("builtin.trap-signal", "trap 'echo caught' USR1\nkill -USR1 $$\necho after\nkill -USR1 $$\necho again", True)
t("builtin.trap-handler-exit", "trap 'echo handler; exit 3' TERM\nkill -TERM $$\necho notreached", True)
t("builtin.trap-ignore", "trap '' TERM\nkill -TERM $$\necho survived", True)
t("builtin.trap-listing", "trap 'echo T' TERM\ntrap 'x=1' INT\ntrap\ntrap - INT\ntrap", True)
t("builtin.trap-subshell", "trap 'echo sub' EXIT\n(echo in sub)\necho main", True)
t("builtin.trap-in-subshell", "(trap 'echo subexit' EXIT; echo in); echo out\n(trap 'echo a' EXIT; exit 5); echo $?", True)
t("builtin.kill-default", "$TEST_SHELL -c 'kill -TERM $$'; echo $?\n$TEST_SHELL -c 'kill -s INT $$'; echo $?")
t("builtin.kill-zero", "kill -0 $$; echo $?\nkill -l 9\nkill -l 15", True)
t("builtin.kill-bg", "sleep 5 & pid=$!\nkill $pid\nwait $pid; echo $?")
t("builtin.wait", "false & wait $!; echo $?\n(exit 3) & wait $!; echo $?\nwait; echo $?", True)
t("builtin.wait-unknown", "wait 999999; echo $?", True)
t("builtin.command", "command true; echo $?\nf() { echo f; }\ncommand f 2>/dev/null; echo $?\ncommand -v cd\ncommand -v nosuch; echo $?", True)
t("builtin.command-special", "command readonly v=1\ncommand v=2 2>/dev/null\necho $?", True)
t("builtin.type", "type echo\ntype cd\ntype export\ntype if\nf() { :; }; type f\ntype nosuch 2>/dev/null; echo $?", True)
t("builtin.alias", "alias say='echo said'\nsay hi\nalias say\nunalias say\nsay 2>/dev/null; echo $?\nunalias nosuch 2>/dev/null; echo $?", True)
t("builtin.alias-multi", "alias a1='echo one; echo two'\na1", True)
t("builtin.cd-pwd", "mkdir -p sub/inner\ncd sub; basename \"$(pwd)\"\ncd inner; basename \"$PWD\"\ncd ..; cd ..\ncd - >/dev/null; basename \"$PWD\"\ncd nosuch 2>/dev/null; echo $?")
t("builtin.cd-sym", "mkdir d 2>/dev/null\ncd /; echo $PWD\ncd /tmp; echo $PWD; echo $OLDPWD", False)
t("builtin.umask", "umask 027; umask; umask -S\numask 0022; umask\n(umask 077); umask")
t("builtin.umask-sym", "umask 027; umask; umask -S\n(umask 077); umask", True)
t("builtin.times", "times >/dev/null; echo $?", True)
t("builtin.hash", "hash -r; echo $?")
t("builtin.pwd-logical", "mkdir real; ln -s real link\ncd link\nbasename \"$(pwd)\"; basename \"$(pwd -P)\"")

# ------------------------------------------------------------------ semantics
t("semantics.field-splitting", 'x="a b  c"; echo $x; echo "$x"; set -- $x; echo $#', True)
t("semantics.ifs-custom", "IFS=:; x=a:b::c; set -- $x; echo $#; for i; do echo \"[$i]\"; done", True)
t("semantics.ifs-mixed", "IFS=\", \"; x=\"a, b,,c\"; set -- $x; echo $#; printf '[%s]' \"$@\"; echo", True)
t("semantics.ifs-empty", "IFS=; x=\"a b\"; set -- $x; echo $#\nunset IFS; x=\"a\tb  c\"; set -- $x; echo $#", True)
t("semantics.ifs-whitespace-only", "x=\"   \"; set -- $x; echo $#\nx=\" a  b \"; set -- $x; echo $#", True)
t("semantics.ifs-join", "set -- a b c\nIFS=-; echo \"$*\"; x=\"$*\"; echo $x\nIFS=; echo \"$*\"", True)
t("semantics.at-star", "set -- a \"b c\" d\nfor i in \"$@\"; do echo \"[$i]\"; done\nfor i in $*; do echo \"<$i>\"; done\necho \"$*\"", True)
t("semantics.at-edge", "set --; for i in \"$@\"; do echo \"[$i]\"; done; echo end\nset -- 1 2; for i in \"x$@\"; do echo \"[$i]\"; done\nset -- a \"\" c; echo $#; for i in $@; do echo \"[$i]\"; done", True)
t("semantics.empty-args", "set -- \"\"; echo $#\nx=; set -- $x; echo $#; set -- \"$x\"; echo $#\nf() { echo $#; }; f \"\" \"\"", True)
t("semantics.param-defaults", "echo ${x:-def} ${x-d2} ${x:=set} $x\necho ${x:+alt} ${y+alt}\necho \"${u:-\"quoted default\"}\"\necho ${u2:-$((1+2))}", True)
t("semantics.param-affixes", "x=hello.tar.gz; echo ${x%.*} ${x%%.*} ${x#*.} ${x##*.} ${#x}\nx=/usr/local/bin/tool; echo ${x##*/} ${x%/*}\nx=abcabc; echo ${x#*b} ${x##*b} ${x%b*} ${x%%b*}", True)
t("semantics.param-affix-patterns", "x=abc; echo ${x#a} ${x%c} ${x#\"a\"} \"${x#*}\" ${x##*}\nx=hello; echo ${x#[hH]} ${x%[!o]o}\nx=aaa; echo ${x#a*} ${x##a*} \"[${x%%a*}]\"", True)
t("semantics.param-error", "unset x\n(echo ${x?custom msg}) 2>/dev/null; echo $?\nf() { echo ${1:?need arg}; }; (f) 2>/dev/null; echo $?", True)
t("semantics.param-error-exits", "unset x\necho ${x?gone}\necho notreached", True)
t("semantics.positional-many", "set -- 1 2 3 4 5 6 7 8 9 10 11\necho ${10} ${11} $10 \"$11\"\necho $#", True)
t("semantics.special-params", "echo $# \"$@\"\nf() { echo $#; }; f a b c\necho $$ | grep -q '^[0-9][0-9]*$' && echo pid-ok")
t("semantics.nounset", "set -u\nx=1; echo ${x}; echo ${y:-default}; echo ${y-d2}\necho $#\necho ${undefined_var}\necho notreached", True)
t("semantics.quoting", "echo 'single' \"double $((1+1))\" \\$escaped \\\\ back\necho \"a\\\"b\" 'c'\"'\"'d'\nx=1; echo \"$x\"'$x'\"\\$x\"\necho \"it's\"", True)
t("semantics.quoting-newlines", "echo 'a\nb'\necho \"line1\nline2\"\necho a\\\nb", True)
t("semantics.tilde", "HOME=/home/u; echo ~ ~/foo x~y \"~\"\nx=~; echo $x", True)
t("semantics.cmdsubst", "echo `echo back` $(echo \"nest $(echo deep)\")\nx=`echo a\\`echo b\\`c`; echo $x\necho \"$(echo \"$(echo nested \"quotes\")\")\"", True)
t("semantics.cmdsubst-trim", "echo \"$(printf 'a\\n\\n\\n')\" end\nz=$(printf 'a\\n\\n'); echo \"[$z]\"\nx=$(echo a; echo b); echo \"$x\"", True)
t("semantics.cmdsubst-status", "x=$(exit 5); echo $?\nx=hi; echo $?\nx=$(false); echo $?\necho $(exit 3); echo $?", True)
t("semantics.cmdsubst-subshell-state", "x=1; y=$(x=2; echo $x); echo $x $y\nv=$(for i in 1 2 3; do echo $i; done); echo $v", True)
t("semantics.cmdsubst-case", "echo $(case a in a) echo inside;; esac)\necho $( (echo sub) )\necho $( echo \"(paren)\" )", True)
t("semantics.arith-basic", "echo $((1<<4)) $((7/2)) $((-7%3)) $((x=5, x*2)) $((0x1f)) $((010))\necho $(( 1 + 2 * 3 - 4 / 2 )) $(( (1+2)*3 ))", True)
t("semantics.arith-logic", "echo $(( 1 ? 2 : 3 )) $(( 0 && 1 )) $(( 0 || 5 )) $(( ~0 )) $(( !3 ))\necho $(( 5 > 3 )) $(( 3 == 3 )) $(( 4 != 4 )) $(( 6 & 3 )) $(( 6 | 3 )) $(( 6 ^ 3 ))\necho $(( 1 ? 0 ? 7 : 8 : 9 )) $(( 0 && (1/0) )) $(( 1 || (1/0) ))", True)
t("semantics.arith-assign", "y=42 x=5; echo $((y += $x)); echo $((y)) $y\nn=3; echo $(( n << 2 )) $(( n >> 1 )) $(( n *= 2 )) $n\nx=1; echo $(( x <<= 3, x ))", True)
t("semantics.arith-vars", "x=3; y=x; echo $(( y + 1 ))\ny=; echo $(( y + 1 ))\ny='1+1'; echo $(( y * 3 ))", True)
t("semantics.arith-overflow", "echo $((2147483647 + 1)) $((9223372036854775807 + 1))\necho $(( 7 % -3 )) $(( -7 / 2 ))", True)
t("semantics.arith-divzero", "echo $(( 10 / 0 ))\necho after", True)
t("semantics.arith-syntax", "echo $(( 1 + ))\necho after", True)
t("semantics.glob", ": > a; : > b; : > c; : > app; : > apple; mkdir d; : > d/e\necho a* ap? \"a*\" 'a*' [ab]\necho d/*\necho nomatch*", True)
t("semantics.glob-classes", ": > a1; : > b2; : > x.\necho [[:alpha:]]2 [[:digit:]]* [!a]?\necho *.", True)
t("semantics.glob-dotfiles", ": > .hidden; : > vis\necho *\necho .h*", True)
t("semantics.glob-dirs", "mkdir -p d/sub; : > d/f\nfor f in d/*; do echo $f; done\nfor f in d/*/; do echo $f; done")
t("semantics.glob-var", ": > ab; x='a*'; echo $x \"$x\"\nset -f; echo $x", True)
t("semantics.glob-prefixes", ": > ap; : > app; : > appall; : > apparition; : > appendix; : > applejack\necho a*\necho ap?\necho appa*\necho \"a*\"", True)
t("semantics.case", "case x in y|x) echo matched;; esac\ncase \"a b\" in \"a b\") echo q;; esac\ncase ab in a\\*) echo no;; a*) echo glob;; esac\ncase \"\" in \"\") echo empty;; esac", True)
t("semantics.case-patterns", "case abc in [a-c]bc) echo range;; esac\ncase b in [!a]) echo notA;; esac\ncase \"[\" in [[]) echo bracket;; esac\ncase \"-\" in [a-]) echo dash;; esac\ncase x in (x) echo paren;; esac", True)
t("semantics.case-expanded", "x='a*b'; case aXb in $x) echo glob;; esac; case 'a*b' in \"$x\") echo lit;; esac\ncase abc in $(echo a)*) echo substpat;; esac\nx=b; case abc in a${x}c) echo varpat;; esac", True)
t("semantics.case-status", "case x in x) false;; esac; echo $?\nx=a; case $x in a) ;; esac; echo $?\ncase z in a) echo no;; esac; echo $?", True)
t("semantics.if", "if true; then echo a; elif true; then echo b; else echo c; fi\nif false; then echo a; elif false; then echo b; else echo c; fi\nif (exit 3); then :; else echo $?; fi\nif false; then :; fi; echo $?", True)
t("semantics.while-until", "i=0; while [ $i -lt 3 ]; do i=$((i+1)); echo $i; done\nx=10; until [ $x -le 7 ]; do x=$((x-1)); done; echo $x\nwhile false; do :; done; echo $?", True)
t("semantics.for", "for i in 1 2 3; do echo $i; done\nn=0; for i in a b c; do n=$((n+1)); done; echo $n $i\nfor i in; do echo no; done; echo $?\nfor in in in; do echo $in; done", True)
t("semantics.for-positional", "set -- p q\nfor i do echo $i; done\nfor i; do echo $i; done", True)
t("semantics.and-or", "false && false || echo a && echo b\ntrue || false && echo c\n! true || echo neg\n{ (exit 1); } && echo no || echo yes", True)
t("semantics.negation", "! true; echo $?\n! false; echo $?\n! (exit 7); echo $?\nset -e; ! true; echo survived", True)
t("semantics.status-compound", "false; { :; }; echo $?\n(false); echo $?; { false; }; echo $?\nfalse; for i in a; do :; done; echo $?", True)
t("semantics.functions", "f() { echo \"args: $# $1 $2\"; return 4; }\nf x y; echo $?\nf() { echo $1; shift; echo $#; }; set -- a b c; f x y; echo $# $1", True)
t("semantics.function-globals", "f() { x=infunc; }; f; echo $x\nf() { echo \"$@\"; }; x=1 f a; echo ${x}", True)
t("semantics.function-recursion", "fact() { if [ $1 -le 1 ]; then echo 1; else echo $(( $1 * $(fact $(($1-1))) )); fi; }\nfact 6", True)
t("semantics.function-recursion-locals", "fib() { if [ $1 -lt 2 ]; then r=$1; return; fi; fib $(($1-1)); local a=$r; fib $(($1-2)); r=$((a+r)); }\nfib 10; echo $r")
t("semantics.function-redirect", "f() { echo body; } > fout\nf; read l < fout; echo \"[$l]\"\ng() { echo \"$@\" >&2; } 2>&1; g redirected", True)
t("semantics.function-heredoc", "f() { cat <<EOF\nin func $1\nEOF\n}\nf arg")
t("semantics.lexical-break", "f() { break; }\nfor i in 1 2 3; do f; echo hi; done", True)
t("semantics.subshell", "x=1; (x=2; echo $x); echo $x\n( ( exit 4 ) ); echo $?\n(cd /; echo $PWD); [ \"$PWD\" != / ] && echo unchanged", True)
t("semantics.brace-group", "x=1; { x=2; }; echo $x\n{ echo a; echo b; } | { read l; echo $l; }", True)
t("semantics.pipeline-status", "false | true; echo $?\ntrue | false; echo $?\n! true | false; echo $?", True)
t("semantics.pipeline-subshells", "x=0; echo 1 | x=1; echo $x\necho x | while read l; do v=$l; done; echo \"[$v]\"\necho a | { read x; echo $x; }", True)
t("semantics.pipeline-externals", "echo a | cat | cat | tr a b\nprintf '3\\n1\\n2\\n' | sort")
t("semantics.redirect-files", "echo one > f; echo two >> f\nwhile read l; do echo \"<$l>\"; done < f\n{ echo a; echo b; } > g; read x < g; echo $x", True)
t("semantics.redirect-fds", "echo hi >&2 2>/dev/null; echo out\n{ echo err >&2; } 2>&1 | { read l; echo \"[$l]\"; }\nx=$( { echo out; echo err >&2; } 2>&1 ); echo \"$x\"", True)
t("semantics.redirect-order", "ls /nonexist 2>&1 >/dev/null | wc -l\necho 1 2>&1 >/dev/null | wc -l")
t("semantics.redirect-errors", "cat < nosuchfile 2>/dev/null; echo $?\necho x > /nonexist/x 2>/dev/null; echo $?")
t("semantics.redirect-read-missing", "read x < nosuchfile 2>/dev/null; echo $?\n: > /nonexist/dir/f 2>/dev/null; echo $?", True)
t("semantics.noclobber", "set -C\necho a > f; echo b > f 2>/dev/null; echo $?\necho c >| f; read l < f; echo $l", True)
t("semantics.heredoc", "cat <<'EOF'\n$HOME `x` \\n\nEOF\ncat <<-EOF\n\ttabbed\n\tEOF")
t("semantics.heredoc-expansion", "x=val\nread a <<E\n$x $((1+1))\nE\necho \"$a\"\nread b <<\"E\"\n$x\nE\necho \"$b\"", True)
t("semantics.heredoc-multiple", "read a <<E1; read b <<E2\none\nE1\ntwo\nE2\necho $a $b\n{ read c; read d; } <<EOF\n1\n2\nEOF\necho $c$d", True)
t("semantics.heredoc-in-subst", "x=$(while read l; do echo \"[$l]\"; done <<EOF\ninner\nEOF\n); echo $x", True)
t("semantics.assignments", "a=1 b=2; echo $a$b\nx=a; x=${x}b${x}; echo $x\nx=5; x=$((x*2)) y=$x; echo $x $y\na=b=c; echo $a", True)
t("semantics.assignment-prefix", "x=1 true; echo ${x-unset}\ny=2 :; echo ${y-unset}\na=x env | grep '^a='")
t("semantics.errexit", "set -e\nif false; then :; fi\nfalse || true\n! true\nf() { false; echo inf; }\nif f; then echo yes; fi\necho survived\nfalse\necho notreached", True)
t("semantics.errexit-subst", "set -e\nx=$(false)\necho notreached", True)
t("semantics.errexit-pipeline", "set -e\nfalse | true\necho piped\ntrue | false\necho notreached", True)
t("semantics.errexit-subshell", "set -e\n(false)\necho notreached", True)
t("semantics.errexit-andor", "set -e\n{ false; } || echo caught\nfalse && echo no\necho end", True)
t("semantics.errexit-function", "set -e\nf() { false; echo inf; }\nf\necho after", True)
t("semantics.background", "(exit 3) & wait $!; echo $?\nx=1; x=2 & wait; echo $x", True)
t("semantics.command-not-found", "nosuchcommand 2>/dev/null; echo $?\n./nosuchfile 2>/dev/null; echo $?", True)
t("semantics.command-not-executable", ": > plain; ./plain 2>/dev/null; echo $?\nchmod +x plain; ./plain; echo $?")
t("semantics.path-unset", "unset PATH\nls 2>/dev/null; echo $?\necho builtin-ok")
t("semantics.script-noexec", "echo 'echo from script $1' > s; chmod +x s\n./s arg")
t("semantics.signal-exit-status", "$TEST_SHELL -c 'exit 300'; echo $?\nsleep 5 & kill -9 $!; wait $!; echo $?")

# ------------------------------------------------------------------ parse
t("parse.comments", "echo a # comment\n# whole line\necho b#notcomment\necho 'quoted # kept'", True)
t("parse.continuation", "echo a\\\nb\nec\\\nho joined\nx=1\\\n2; echo $x", True)
t("parse.reserved-words", "echo if then else fi\nx=if; echo $x\n{ echo braces; }\necho {a,b}\nfor w in do done; do echo $w; done", True)
t("parse.nested-quotes", "echo \"$(echo \"a \\\"b\\\" c\")\"\necho \"${x:-\"a b\"}\" ${x:-a  b}\nx=1; echo \"${x+\"a b\"}\"", True)
t("parse.syntax-error", "echo before\nif then\necho after", True)
t("parse.double-bang", "! ! true\necho after", True)
t("parse.semicolons-newlines", "echo a; echo b\n\n\necho c &&\necho d ||\necho e\nif true\nthen\necho f\nfi", True)
t("parse.case-layout", "case a in\n  a)\n    echo first\n    ;;\n  b) echo second ;;\nesac\ncase b in a) ;; b) echo last\nesac", True)
t("parse.heredoc-quoted-delims", "cat <<'E O'\nx\nE O\ncat <<\\EOF\n$x\nEOF")
t("parse.function-forms", "g() { echo g; }\nh()\n{\n  echo h\n}\ng; h", True)

# ------------------------------------------------------------------ sh
t("sh.dash-c-args", "$TEST_SHELL -c 'echo $0 $1 $#' name arg\n$TEST_SHELL -c 'exit 7'; echo $?")
t("sh.dash-s", "echo 'echo from stdin $1' | $TEST_SHELL -s arg1")
t("sh.script-operand", "echo 'echo $# $1 $2' > s.sh\n$TEST_SHELL s.sh a b\necho 'echo $0' > t.sh; $TEST_SHELL t.sh")
t("sh.option-flags", "$TEST_SHELL -e -c 'false; echo no'; echo $?\n$TEST_SHELL -o errexit -c 'false; echo no'; echo $?\n$TEST_SHELL -u -c 'echo $nope' 2>/dev/null; echo $?")
t("sh.bad-option", "$TEST_SHELL -Z -c 'echo hi' 2>/dev/null; echo $?")
t("sh.dash-c-missing", "$TEST_SHELL -c 2>/dev/null; echo $?")
t("sh.stdin-script", "printf 'x=1\\necho $x\\nexit 4\\n' | $TEST_SHELL; echo $?")
t("sh.dashdash", "$TEST_SHELL -c 'echo \"$@\"' sh -- a b")
t("sh.flags-in-dollar-dash", "$TEST_SHELL -f -c 'case $- in *f*) echo has-f;; esac'")

# ------------------------------------------------------------------ speed
t("speed.loop", "i=0; s=0\nwhile [ $i -lt 1500 ]; do i=$((i+1)); s=$((s+i)); done\necho $s")
t("speed.functions", "f() { r=$(( $1 + 1 )); }\ni=0; while [ $i -lt 500 ]; do f $i; i=$r; done; echo $i")

# ------------------------------------------------------------------ documented divergences
DIV = {
    "semantics.local-unset": ("x=outer\nf() { local x; echo \"[${x-unset}]\"; }\nf\necho $x", "[unset]\nouter\n", True),
    "semantics.cmdsubst-status-during-expansion": ("echo $(echo a; exit 3) $?", "a 3\n", True),
    "builtin.echo-backslashes": ("echo 'a\\tb' \"c\\nd\"", "a\\tb c\\nd\n", True),
    "semantics.arith-postfix": ("x=5; echo $((x++)) $x $((x--)) $x", "5 6 6 5\n", True),
}

if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    for name, body in T.items():
        with open(os.path.join(OUT, name + ".test"), "w", encoding="latin-1") as f:
            f.write(body)
    for name, (body, out, sym) in DIV.items():
        with open(os.path.join(OUT, name + ".test"), "w", encoding="latin-1") as f:
            f.write((S if sym else "") + body + "\n")
        with open(os.path.join(OUT, name + ".test.out"), "w", encoding="latin-1") as f:
            f.write(out)
        if os.path.exists(os.path.join(OUT, name + ".test.ec")):
            os.remove(os.path.join(OUT, name + ".test.ec"))
    print(len(T) + len(DIV), "tests;", sum(1 for b in T.values() if b.startswith(S)) + sum(1 for d in DIV.values() if d[2]), "symbolic")
