#include "relevant/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "relevant/error.hpp"
#include "relevant/util.hpp"

namespace relevant {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(std::size_t line_no, const std::string& why)
{
    throw Error(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": " + why);
}

Document parse_record(const std::string& line, std::size_t line_no)
{
    json record;
    try {
        record = json::parse(line);
    } catch (const json::exception& e) {
        malformed(line_no, e.what());
    }
    if (!record.is_object()) {
        malformed(line_no, "record is not a JSON object");
    }

    Document doc;
    const auto id = record.find("id");
    if (id == record.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
        malformed(line_no, "missing or empty string field 'id'");
    }
    doc.id = id->get<std::string>();

    const auto text = record.find("text");
    if (text == record.end() || !text->is_string()) {
        malformed(line_no, "missing string field 'text'");
    }
    doc.text = text->get<std::string>();

    if (const auto label = record.find("label"); label != record.end() && !label->is_null()) {
        if (!label->is_number_integer() || (label->get<long long>() != 0 && label->get<long long>() != 1)) {
            malformed(line_no, "'label' must be the integer 0 or 1");
        }
        doc.label = label->get<long long>() == 1 ? Label::Relevant : Label::Irrelevant;
    }

    if (const auto entities = record.find("entities"); entities != record.end() && !entities->is_null()) {
        if (!entities->is_array()) {
            malformed(line_no, "'entities' must be a list of [start, end] pairs");
        }
        for (const auto& pair : *entities) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
                !pair[1].is_number_unsigned()) {
                malformed(line_no, "'entities' must be a list of [start, end] pairs");
            }
            doc.entities.push_back({pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
        }
    }
    return doc;
}

}  // namespace

LabeledCorpus::LabeledCorpus(std::vector<Document> documents) : documents_(std::move(documents))
{
    if (documents_.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "corpus contains no documents");
    }
    for (const auto& doc : documents_) {
        if (!doc.label) {
            throw Error(ErrorKind::MissingLabel, doc.id);
        }
        ++(*doc.label == Label::Relevant ? n_positive_ : n_negative_);
    }
}

void LabeledCorpus::require_both_classes() const
{
    if (!has_both_classes()) {
        throw Error(ErrorKind::BothClassesRequired,
                    "corpus has " + std::to_string(n_positive_) + " relevant and " +
                        std::to_string(n_negative_) + " irrelevant documents");
    }
}

std::vector<Label> LabeledCorpus::labels() const
{
    std::vector<Label> out;
    out.reserve(documents_.size());
    for (const auto& doc : documents_) {
        out.push_back(*doc.label);
    }
    return out;
}

std::vector<Document> read_documents(std::istream& in, LabelPolicy policy)
{
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        Document doc = parse_record(line, line_no);
        if (policy == LabelPolicy::Required && !doc.label) {
            throw Error(ErrorKind::MissingLabel, doc.id);
        }
        if (!seen.insert(doc.id).second) {
            throw Error(ErrorKind::DuplicateId, doc.id);
        }
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "no records found");
    }
    return docs;
}

std::vector<Document> load_documents(const std::filesystem::path& path, LabelPolicy policy)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open corpus file " + path.string());
    }
    return read_documents(in, policy);
}

LabeledCorpus load_corpus(const std::filesystem::path& path)
{
    return LabeledCorpus(load_documents(path, LabelPolicy::Required));
}

void write_documents(std::ostream& out, const std::vector<Document>& documents)
{
    for (const auto& doc : documents) {
        // ordered_json keeps the canonical key order on output
        nlohmann::ordered_json record;
        record["id"] = doc.id;
        record["text"] = doc.text;
        if (doc.label) {
            record["label"] = *doc.label == Label::Relevant ? 1 : 0;
        }
        if (!doc.entities.empty()) {
            auto& spans = record["entities"] = nlohmann::ordered_json::array();
            for (const auto& span : doc.entities) {
                spans.push_back({span.begin, span.end});
            }
        }
        out << record.dump() << '\n';
    }
}

void save_documents(const std::filesystem::path& path, const std::vector<Document>& documents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write corpus file " + path.string());
    }
    write_documents(out, documents);
}

std::string CorpusSummary::ratio_string() const
{
    return format_percent(positive_percent) + "%-" + format_percent(100.0 - positive_percent) + "%";
}

CorpusSummary corpus_stats(const LabeledCorpus& corpus)
{
    CorpusSummary summary;
    summary.n_documents = corpus.size();
    summary.n_positive = corpus.n_positive();
    summary.n_negative = corpus.n_negative();
    summary.positive_percent =
        100.0 * static_cast<double>(corpus.n_positive()) / static_cast<double>(corpus.size());
    for (const auto& doc : corpus.documents()) {
        std::istringstream words(doc.text);
        std::string word;
        while (words >> word) {
            ++summary.token_estimate;
        }
    }
    return summary;
}

}  // namespace relevant
