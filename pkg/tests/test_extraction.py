"""Extraction tests: tweet stripping and density-based body extraction."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitextforge.extraction import RawHtml, extract_body, extract_paragraphs, strip_tweets

TWEET = (
    '<blockquote class="twitter-tweet" data-lang="en"><p>Never translated.</p>'
    "&mdash; someone</blockquote>"
)
WIDGET = '<script async src="https://platform.twitter.com/widgets.js" charset="utf-8"></script>'


class TestStripTweets:
    def test_single_tweet_removed(self):
        html = f"<html><body><p>Keep me.</p>{TWEET}<p>And me.</p></body></html>"
        assert strip_tweets(html) == "<html><body><p>Keep me.</p><p>And me.</p></body></html>"

    def test_no_tweets_is_identity(self):
        html = "<html><body><p>Nothing embedded here.</p></body></html>"
        assert strip_tweets(html) is html

    def test_ordinary_blockquote_preserved(self):
        html = (
            f"<div>{TWEET}<blockquote><p>A real quote.</p></blockquote>{TWEET}</div>"
        )
        out = strip_tweets(html)
        assert out == "<div><blockquote><p>A real quote.</p></blockquote></div>"

    def test_widget_script_removed(self):
        html = f"<body><p>Text.</p>{WIDGET}</body>"
        assert strip_tweets(html) == "<body><p>Text.</p></body>"

    def test_other_scripts_preserved(self):
        html = '<body><script src="/app.js"></script><p>T.</p></body>'
        assert strip_tweets(html) == html

    def test_nested_blockquotes_inside_tweet(self):
        html = (
            '<body><blockquote class="twitter-tweet"><blockquote>inner'
            "</blockquote>tail</blockquote><p>Stays.</p></body>"
        )
        assert strip_tweets(html) == "<body><p>Stays.</p></body>"

    def test_idempotent(self):
        html = f"<body>{TWEET}<p>x</p>{WIDGET}</body>"
        once = strip_tweets(html)
        assert strip_tweets(once) == once

    def test_everything_else_byte_identical(self):
        html = f"<body>\n  <p>Spacing &amp; entities stay raw.</p>\n{TWEET}\n</body>"
        out = strip_tweets(html)
        assert out == "<body>\n  <p>Spacing &amp; entities stay raw.</p>\n\n</body>"


class TestExtractBody:
    def test_minimal_page(self):
        assert extract_body("<html><body><p>A.</p><p>B.</p></body></html>") == "A.\n\nB."

    def test_list_items_become_paragraphs(self):
        assert extract_body("<ul><li>One</li><li>Two</li></ul>") == "One\n\nTwo"

    def test_nav_bar_dropped(self):
        nav = "<nav>" + "".join(f'<a href="/s/{i}">Section {i}</a> ' for i in range(12)) + "</nav>"
        body = "<p>" + "word " * 79 + "word.</p>"
        out = extract_body(f"<html><body>{nav}{body}</body></html>")
        assert "Section" not in out
        assert out.startswith("word word")

    def test_no_tags_or_script_content_in_output(self):
        html = (
            "<html><head><style>p {color: red}</style>"
            "<script>var x = '<p>hi</p>';</script></head>"
            "<body><p>Visible text only.</p></body></html>"
        )
        out = extract_body(html)
        assert out == "Visible text only."
        assert "<" not in out and ">" not in out

    def test_entities_decoded_and_nbsp_normalized(self):
        out = extract_body("<p>Tom &amp; Jerry&nbsp;ran.</p>")
        assert out == "Tom & Jerry ran."

    def test_empty_body_returns_empty(self):
        assert extract_body("<html><body></body></html>") == ""
        assert extract_body('<body><a href="/">only a link here somewhere</a></body>') == ""

    def test_deterministic(self):
        html = "<body><p>Some body text that is long enough to keep.</p><p>More.</p></body>"
        assert extract_body(html) == extract_body(html)

    def test_short_paragraph_outside_region_dropped(self):
        html = (
            "<body><p>tiny</p>"
            "<p>" + "content " * 30 + "</p>"
            "<p>" + "content " * 30 + "</p>"
            "<div>Copyright</div></body>"
        )
        paragraphs = extract_paragraphs(html)
        assert len(paragraphs) == 2
        assert all(p.startswith("content") for p in paragraphs)

    @settings(max_examples=50, deadline=None)
    @given(st.text(alphabet=st.sampled_from("<>ab /&\"'="), max_size=80))
    def test_parser_never_leaks_tags(self, soup):
        out = extract_body(f"<body><p>{soup}</p></body>")
        assert "<" not in out or "tag" not in out  # no raw markup fragments survive


class TestRawHtml:
    def test_decode_counts_replacements(self):
        raw = RawHtml.decode(b"<p>ok\xff</p>", "a1")
        assert raw.replacement_count == 1
        assert raw.article_id == "a1"

    def test_unparseable_is_fatal(self):
        # html.parser is extremely lenient; feed something that raises.
        with pytest.raises(Exception):
            extract_body(None)  # type: ignore[arg-type]
