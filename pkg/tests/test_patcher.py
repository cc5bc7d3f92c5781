import pytest

from smartdoc.errors import StalePatchError
from smartdoc.javasrc import parse_file
from smartdoc.javasrc.model import SourceFile
from smartdoc.javasrc.parser import detect_package
from smartdoc.patcher import apply_patch, format_javadoc, plan_patch, unified_diff


def parse_text(text: str, path: str = "T.java"):
    return parse_file(SourceFile(path=path, text=text, package_name=detect_package(text)))


def method_named(res, name):
    return next(m for m in res.methods if m.name == name)


class TestFormat:
    def test_single_line_normal_form(self):
        out = format_javadoc("/** X. */", "    ")
        assert out == "    /**\n     * X.\n     */"

    def test_already_normalized_is_fixpoint(self):
        block = "    /**\n     * X.\n     */"
        assert format_javadoc(block, "    ") == block

    def test_format_is_idempotent(self):
        first = format_javadoc("/**\n * Adds values.\n * @return sum\n */", "  ")
        assert format_javadoc(first, "  ") == first

    def test_tag_lines_kept_separate(self):
        out = format_javadoc("/** Adds.\n@param a left operand\n@return sum */", "")
        assert out.splitlines() == [
            "/**",
            " * Adds.",
            " * @param a left operand",
            " * @return sum",
            " */",
        ]

    def test_blank_interior_line_preserved(self):
        out = format_javadoc("/** One.\n\nTwo. */", "")
        assert out.splitlines() == ["/**", " * One.", " *", " * Two.", " */"]

    def test_leading_trailing_blanks_dropped(self):
        out = format_javadoc("/**\n\n * Body.\n\n */", "")
        assert out.splitlines() == ["/**", " * Body.", " */"]


SIMPLE = (
    "package p;\n"
    "class C {\n"
    "    int plain(int x) {\n"
    "        return x;\n"
    "    }\n"
    "\n"
    "    /** Old words here. */\n"
    "    int documented(int x) {\n"
    "        return x + 1;\n"
    "    }\n"
    "\n"
    "    @Deprecated\n"
    "    @SuppressWarnings(\"unused\")\n"
    "    int annotated(int x) {\n"
    "        return x - 1;\n"
    "    }\n"
    "}\n"
)


class TestPlanAndApply:
    def test_insertion_above_declaration(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "plain")
        formatted = format_javadoc("/** New doc. */", m.indent)
        patch = plan_patch(m, formatted, SIMPLE)
        out = apply_patch(SIMPLE, patch)
        assert "    /**\n     * New doc.\n     */\n    int plain(int x) {" in out

    def test_insertion_goes_above_annotations(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "annotated")
        formatted = format_javadoc("/** Annotated doc. */", m.indent)
        out = apply_patch(SIMPLE, plan_patch(m, formatted, SIMPLE))
        idx_doc = out.index("Annotated doc.")
        idx_anno = out.index("@Deprecated")
        assert idx_doc < idx_anno

    def test_replacement_removes_old_block(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "documented")
        formatted = format_javadoc("/** Fresh words. */", m.indent)
        out = apply_patch(SIMPLE, plan_patch(m, formatted, SIMPLE))
        assert "Old words here." not in out
        assert out.count("Fresh words.") == 1

    def test_reparse_finds_new_comment(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "plain")
        formatted = format_javadoc("/** New doc. */", m.indent)
        out = apply_patch(SIMPLE, plan_patch(m, formatted, SIMPLE))
        m2 = method_named(parse_text(out), "plain")
        assert m2.doc_comment is not None
        assert format_javadoc(m2.doc_comment, m2.indent) == formatted

    def test_double_application_is_noop(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "documented")
        formatted = format_javadoc("/** Stable text. */", m.indent)
        once = apply_patch(SIMPLE, plan_patch(m, formatted, SIMPLE))
        m2 = method_named(parse_text(once), "documented")
        twice = apply_patch(once, plan_patch(m2, formatted, once))
        assert twice == once

    def test_single_hunk_isolation(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "documented")
        formatted = format_javadoc("/** Fresh words. */", m.indent)
        out = apply_patch(SIMPLE, plan_patch(m, formatted, SIMPLE))
        diff = unified_diff(SIMPLE, out, "T.java")
        assert diff.count("@@") == 2  # one hunk header contains two @@

    def test_bytes_outside_span_unchanged(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "documented")
        formatted = format_javadoc("/** Fresh words. */", m.indent)
        patch = plan_patch(m, formatted, SIMPLE)
        out = apply_patch(SIMPLE, patch)
        start, end = patch.replace_span
        assert out[:start] == SIMPLE[:start]
        assert out[len(out) - (len(SIMPLE) - end):] == SIMPLE[end:]

    def test_stale_at_plan_time(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "plain")
        edited = SIMPLE.replace("return x;", "return x * 2;")
        with pytest.raises(StalePatchError):
            plan_patch(m, format_javadoc("/** D. */", m.indent), edited)

    def test_stale_at_apply_time(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "documented")
        patch = plan_patch(m, format_javadoc("/** D. */", m.indent), SIMPLE)
        drifted = SIMPLE.replace("Old words here.", "Different words.")
        with pytest.raises(StalePatchError):
            apply_patch(drifted, patch)

    def test_insert_patch_not_blindly_reappliable(self):
        res = parse_text(SIMPLE)
        m = method_named(res, "plain")
        patch = plan_patch(m, format_javadoc("/** D. */", m.indent), SIMPLE)
        once = apply_patch(SIMPLE, patch)
        with pytest.raises(StalePatchError):
            apply_patch(once, patch)

    def test_crlf_preserved(self):
        text = "class C {\r\n    int m(int x) {\r\n        return x;\r\n    }\r\n}\r\n"
        res = parse_text(text)
        m = method_named(res, "m")
        formatted = format_javadoc("/** Doc. */", m.indent)
        out = apply_patch(text, plan_patch(m, formatted, text))
        assert "\r\n    /**\r\n" in out or out.startswith("/**")
        assert "\n" not in out.replace("\r\n", "")


class TestFixtureRoundTrip:
    def test_round_trip_every_fixture_method(self, parsed_project):
        for res in parsed_project:
            text = res.source.text
            for m in res.methods:
                formatted = format_javadoc(
                    f"/** Regenerated for {m.name}. */", m.indent
                )
                patch = plan_patch(m, formatted, text)
                patched = apply_patch(text, patch)
                reparsed = parse_file(
                    SourceFile(res.source.path, patched, res.source.package_name)
                )
                m2 = next(x for x in reparsed.methods if x.id == m.id)
                assert m2.doc_comment is not None
                assert format_javadoc(m2.doc_comment, m2.indent) == formatted
                # idempotency on the re-plan
                patch2 = plan_patch(m2, formatted, patched)
                assert apply_patch(patched, patch2) == patched
                # isolation: exactly one hunk
                diff = unified_diff(text, patched, res.source.path)
                assert diff.count("@@") == 2
