#include "fixture_corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdf_builder.hpp"
#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/url.hpp"
#include "pdfcorpus/util.hpp"
#include "pdfcorpus/warc.hpp"

namespace testfx {

namespace fs = std::filesystem;

std::string data_dir() {
#ifdef PDFCORPUS_DATA_DIR
    return PDFCORPUS_DATA_DIR;
#else
    return "data";
#endif
}

std::vector<std::string> heldout_lines(const std::string& lang) {
    std::vector<std::string> lines;
    std::ifstream in(data_dir() + "/lang/" + lang + ".heldout.txt");
    std::string line;
    while (std::getline(in, line)) {
        if (!pdfcorpus::trim(line).empty()) lines.push_back(line);
    }
    return lines;
}

std::string heldout_line(const std::string& lang, int index) {
    auto lines = heldout_lines(lang);
    if (lines.empty()) return "";
    return lines[static_cast<size_t>(index) % lines.size()];
}

std::string train_text(const std::string& lang) {
    auto text = pdfcorpus::read_file(data_dir() + "/lang/" + lang + ".train.txt");
    return text ? *text : "";
}

std::string make_text_pdf(const std::string& text, int lines_per_page) {
    // Greedy wrap into ~58-character lines.
    std::vector<std::string> lines;
    std::string current;
    std::istringstream words(text);
    std::string word;
    while (words >> word) {
        if (!current.empty() && current.size() + 1 + word.size() > 58) {
            lines.push_back(current);
            current.clear();
        }
        if (!current.empty()) current += " ";
        current += word;
    }
    if (!current.empty()) lines.push_back(current);

    PdfSpec spec;
    PageSpec page;
    int on_page = 0;
    for (const auto& line : lines) {
        if (on_page == lines_per_page) {
            spec.pages.push_back(page);
            page = PageSpec{};
            on_page = 0;
        }
        page.items.push_back({72, 770 - 18.0 * on_page, 11, line, 0, "Helvetica", false});
        ++on_page;
    }
    if (!page.items.empty() || spec.pages.empty()) spec.pages.push_back(page);
    spec.creation_date = "D:20210615093000+00'00'";
    spec.creator = "Writer";
    spec.producer = "LibreOffice 7.2";
    return build_pdf(spec).bytes;
}

std::string surt_key(const std::string& url) {
    auto parsed = pdfcorpus::parse_url(url);
    if (!parsed) return url;
    auto labels = pdfcorpus::split(parsed->host, '.');
    std::string key;
    for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
        if (!key.empty()) key += ",";
        key += *it;
    }
    key += ")" + parsed->path;
    return key;
}

FixtureCorpus build_fixture_corpus(const std::string& dir) {
    fs::create_directories(dir);
    FixtureCorpus corpus;
    corpus.warc_filename = "fixture.warc.gz";
    corpus.warc_path = dir + "/" + corpus.warc_filename;
    corpus.cdx_path = dir + "/fixture.cdxj";

    struct Plan {
        const char* url;
        const char* lang;
        int snippet_a;
        int snippet_b;
    };
    // Ten documents, seven languages, ten distinct domains: the per-domain
    // caps (en 1, de 2, others 3) never bind.
    const Plan plans[] = {
        {"https://www.alpha-press.com/reports/annual.pdf", "en", 0, 1},
        {"https://verlag-nord.de/hefte/bericht.pdf", "de", 0, 1},
        {"https://sueddruck.de/archiv/heft2.pdf", "de", 2, 3},
        {"https://editions-loire.fr/docs/rapport.pdf", "fr", 0, 1},
        {"https://mairie-centre.fr/bulletins/ete.pdf", "fr", 2, 3},
        {"https://editorial-sur.es/libros/muestra.pdf", "es", 0, 1},
        {"https://ayuntamiento-rio.es/actas/pleno.pdf", "es", 2, 3},
        {"https://tipografia-monti.it/catalogo/estratto.pdf", "it", 0, 1},
        {"https://livraria-foz.pt/catalogos/outono.pdf", "pt", 0, 1},
        {"https://uitgeverij-delta.nl/brochures/gids.pdf", "nl", 0, 1},
    };

    std::string warc_blob;
    std::string cdx_blob;
    for (const Plan& plan : plans) {
        FixtureDoc doc;
        doc.url = plan.url;
        doc.lang = plan.lang;
        doc.text = heldout_line(plan.lang, plan.snippet_a) + " " +
                   heldout_line(plan.lang, plan.snippet_b);
        doc.pdf_bytes = make_text_pdf(doc.text);

        std::string record = pdfcorpus::build_warc_response(
            doc.url, "Content-Type: application/pdf\r\n", doc.pdf_bytes);
        std::string member = pdfcorpus::gzip_compress(record);
        doc.warc_offset = warc_blob.size();
        doc.warc_length = member.size();
        warc_blob += member;

        cdx_blob += surt_key(doc.url) + " 20220501120000 {\"url\":\"" + doc.url +
                    "\",\"mime\":\"application/pdf\",\"mime-detected\":\"application/pdf\"," +
                    "\"status\":\"200\",\"digest\":\"AAAA\",\"length\":\"" +
                    std::to_string(doc.warc_length) + "\",\"offset\":\"" +
                    std::to_string(doc.warc_offset) + "\",\"filename\":\"" +
                    corpus.warc_filename + "\"}\n";
        corpus.docs.push_back(std::move(doc));
    }
    pdfcorpus::write_file(corpus.warc_path, warc_blob);
    pdfcorpus::write_file(corpus.cdx_path, cdx_blob);
    return corpus;
}

}  // namespace testfx
