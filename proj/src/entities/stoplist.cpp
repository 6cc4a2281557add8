#include <fstream>
#include <sstream>

#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/text.hpp"

namespace doppelkit {

namespace {

// One word per line, lowercase.
constexpr std::string_view kEnglish = R"(a
about
above
after
again
against
ain
all
am
an
and
any
are
aren
as
at
be
because
been
before
being
below
between
both
but
by
can
could
couldn
d
did
didn
do
does
doesn
doing
don
down
during
each
else
ever
every
few
for
from
further
had
hadn
has
hasn
have
haven
having
he
her
here
hers
herself
him
himself
his
how
however
i
if
in
into
is
isn
it
its
itself
just
ll
m
ma
may
me
might
mine
more
most
much
must
mustn
my
myself
neither
never
no
nor
not
now
o
of
off
on
once
one
only
or
other
ought
our
ours
ourselves
out
over
own
quite
rather
re
s
said
same
shall
shan
she
should
shouldn
so
some
such
t
than
that
the
their
theirs
them
themselves
then
there
these
they
this
those
though
through
thus
to
too
under
until
up
upon
us
ve
very
was
wasn
we
were
weren
what
when
where
whether
which
while
who
whom
whose
why
will
with
without
won
would
wouldn
y
yes
yet
you
your
yours
yourself
yourselves
)";

Stoplist parse_lines(std::string_view text) {
  Stoplist out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    out.insert(text::lowercase(line));
  }
  return out;
}

}  // namespace

const Stoplist& english_stoplist() {
  static const Stoplist list = parse_lines(kEnglish);
  return list;
}

Stoplist load_stoplist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lines(buf.str());
}

}  // namespace doppelkit
