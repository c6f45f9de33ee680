#!/usr/bin/env python3
"""Regenerate the bundled method corpus at src/srmforge/data/srm_dataset.json.

The corpus is a curated table of Java library/framework methods with their
security roles and data-flow endpoints, written in the canonical dataset
JSON form.  Edit the tables below and rerun; output is deterministic.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from srmforge.dataset import Dataset, LabelSet, MethodRecord, save_dataset, validate_dataset
from srmforge.features import default_schema, default_token_table, features_from_signature

OUT_PATH = pathlib.Path(__file__).resolve().parents[1] / "src" / "srmforge" / "data" / "srm_dataset.json"

# Each group: (labels, data_in, data_out, [signatures]).  data_in/data_out
# apply to every signature in the group; exceptions get their own group.
GROUPS: list[tuple[tuple[str, ...], tuple[int, ...], int | str, list[str]]] = [
    # --- sources: request parameters / bodies (injection-bearing input) ---
    (("source", "cwe89", "cwe79"), (), "return", [
        "javax.servlet.http.HttpServletRequest.getParameter(String)",
        "javax.servlet.http.HttpServletRequest.getParameterValues(String)",
        "javax.servlet.http.HttpServletRequest.getParameterNames()",
        "javax.servlet.http.HttpServletRequest.getParameterMap()",
        "javax.servlet.http.HttpServletRequest.getQueryString()",
        "javax.servlet.http.HttpServletRequest.getReader()",
        "javax.servlet.http.HttpServletRequest.getInputStream()",
        "javax.servlet.http.HttpServletRequest.getPart(String)",
        "javax.servlet.http.HttpServletRequest.getParts()",
        "javax.servlet.ServletRequest.getParameter(String)",
        "javax.servlet.ServletRequest.getParameterValues(String)",
        "javax.servlet.ServletRequest.getParameterMap()",
        "javax.servlet.ServletRequest.getReader()",
        "javax.servlet.ServletRequest.getInputStream()",
        "jakarta.servlet.http.HttpServletRequest.getParameter(String)",
        "jakarta.servlet.http.HttpServletRequest.getParameterValues(String)",
        "jakarta.servlet.http.HttpServletRequest.getParameterMap()",
        "jakarta.servlet.http.HttpServletRequest.getQueryString()",
        "jakarta.servlet.http.HttpServletRequest.getReader()",
        "jakarta.servlet.http.HttpServletRequest.getInputStream()",
        "org.springframework.web.context.request.WebRequest.getParameter(String)",
        "org.springframework.web.context.request.WebRequest.getParameterValues(String)",
        "org.springframework.web.context.request.WebRequest.getParameterMap()",
        "javax.ws.rs.core.UriInfo.getQueryParameters()",
        "javax.ws.rs.core.UriInfo.getPathParameters()",
        "javax.ws.rs.core.MultivaluedMap.getFirst(Object)",
    ]),
    # --- sources: headers, cookies, request URLs (redirect/XSS-bearing) ---
    (("source", "cwe601", "cwe79"), (), "return", [
        "javax.servlet.http.HttpServletRequest.getHeader(String)",
        "javax.servlet.http.HttpServletRequest.getHeaders(String)",
        "javax.servlet.http.HttpServletRequest.getHeaderNames()",
        "javax.servlet.http.HttpServletRequest.getCookies()",
        "javax.servlet.http.HttpServletRequest.getRequestURI()",
        "javax.servlet.http.HttpServletRequest.getRequestURL()",
        "javax.servlet.http.HttpServletRequest.getPathInfo()",
        "javax.servlet.http.HttpServletRequest.getPathTranslated()",
        "javax.servlet.http.HttpServletRequest.getServletPath()",
        "javax.servlet.http.HttpServletRequest.getRemoteHost()",
        "javax.servlet.http.HttpServletRequest.getRemoteAddr()",
        "jakarta.servlet.http.HttpServletRequest.getHeader(String)",
        "jakarta.servlet.http.HttpServletRequest.getCookies()",
        "jakarta.servlet.http.HttpServletRequest.getRequestURI()",
        "jakarta.servlet.http.HttpServletRequest.getRequestURL()",
        "jakarta.servlet.http.HttpServletRequest.getPathInfo()",
        "javax.servlet.http.Cookie.getValue()",
        "javax.servlet.http.Cookie.getName()",
        "javax.servlet.http.Cookie.getPath()",
        "jakarta.servlet.http.Cookie.getValue()",
        "java.net.URI.getQuery()",
        "java.net.URI.getPath()",
        "java.net.URI.getFragment()",
        "java.net.URL.getQuery()",
        "java.net.URL.getPath()",
        "java.net.URL.getHost()",
    ]),
    # --- sources: caller identity / session state ---
    (("source", "cwe306"), (), "return", [
        "javax.servlet.http.HttpServletRequest.getRemoteUser()",
        "javax.servlet.http.HttpServletRequest.getUserPrincipal()",
        "javax.servlet.http.HttpServletRequest.getAuthType()",
        "javax.servlet.http.HttpServletRequest.getRequestedSessionId()",
        "jakarta.servlet.http.HttpServletRequest.getRemoteUser()",
        "jakarta.servlet.http.HttpServletRequest.getUserPrincipal()",
        "javax.servlet.http.HttpSession.getId()",
        "javax.servlet.http.HttpSession.getAttribute(String)",
        "java.security.Principal.getName()",
        "org.springframework.security.core.context.SecurityContext.getAuthentication()",
        "org.springframework.security.core.Authentication.getPrincipal()",
        "org.springframework.security.core.Authentication.getCredentials()",
    ]),
    # --- sources: process environment and console/stream input ---
    (("source", "cwe78"), (), "return", [
        "java.lang.System.getenv(String)",
        "java.lang.System.getenv()",
        "java.lang.System.getProperty(String)",
        "java.lang.System.getProperty(String,String)",
        "java.io.BufferedReader.readLine()",
        "java.io.Console.readLine()",
        "java.util.Scanner.next()",
        "java.util.Scanner.nextLine()",
        "java.io.DataInputStream.readUTF()",
        "java.net.Socket.getInputStream()",
        "java.net.URLConnection.getInputStream()",
        "java.net.HttpURLConnection.getInputStream()",
    ]),
    # --- sources: generic external data, no single CWE affinity ---
    (("source",), (), "return", [
        "java.io.ObjectInputStream.readObject()",
        "java.nio.file.Files.readString(Path)",
        "java.nio.file.Files.readAllLines(Path)",
        "java.nio.file.Files.readAllBytes(Path)",
        "java.util.Properties.getProperty(String)",
        "javax.naming.InitialContext.lookup(String)",
        "java.util.prefs.Preferences.get(String,String)",
    ]),
    # --- sinks: SQL execution ---
    (("sink", "cwe89"), (0,), "none", [
        "java.sql.Statement.executeQuery(String)",
        "java.sql.Statement.executeUpdate(String)",
        "java.sql.Statement.execute(String)",
        "java.sql.Statement.addBatch(String)",
        "java.sql.Statement.executeLargeUpdate(String)",
        "java.sql.Statement.execute(String,int)",
        "java.sql.Statement.executeUpdate(String,int)",
        "java.sql.Connection.prepareStatement(String)",
        "java.sql.Connection.prepareCall(String)",
        "java.sql.Connection.nativeSQL(String)",
        "java.sql.Connection.prepareStatement(String,int)",
        "org.springframework.jdbc.core.JdbcTemplate.query(String,RowMapper)",
        "org.springframework.jdbc.core.JdbcTemplate.queryForObject(String,Class)",
        "org.springframework.jdbc.core.JdbcTemplate.queryForList(String)",
        "org.springframework.jdbc.core.JdbcTemplate.queryForMap(String)",
        "org.springframework.jdbc.core.JdbcTemplate.queryForRowSet(String)",
        "org.springframework.jdbc.core.JdbcTemplate.update(String)",
        "org.springframework.jdbc.core.JdbcTemplate.execute(String)",
        "org.springframework.jdbc.core.JdbcTemplate.batchUpdate(String[])",
        "org.hibernate.Session.createQuery(String)",
        "org.hibernate.Session.createSQLQuery(String)",
        "org.hibernate.Session.createNativeQuery(String)",
        "javax.persistence.EntityManager.createQuery(String)",
        "javax.persistence.EntityManager.createNativeQuery(String)",
        "javax.persistence.EntityManager.createNativeQuery(String,Class)",
        "org.jooq.DSLContext.fetch(String)",
        "org.jooq.DSLContext.execute(String)",
        "org.jooq.DSLContext.resultQuery(String)",
    ]),
    # --- sinks: OS command execution, single command argument ---
    (("sink", "cwe78"), (0,), "none", [
        "java.lang.Runtime.exec(String)",
        "java.lang.Runtime.exec(String[])",
        "java.lang.ProcessBuilder.ProcessBuilder(List)",
        "java.lang.ProcessBuilder.ProcessBuilder(String[])",
        "java.lang.ProcessBuilder.command(List)",
        "java.lang.ProcessBuilder.command(String[])",
        "org.apache.commons.exec.DefaultExecutor.execute(CommandLine)",
        "org.apache.commons.exec.CommandLine.parse(String)",
        "org.apache.commons.exec.CommandLine.addArgument(String)",
        "javax.script.ScriptEngine.eval(String)",
    ]),
    # --- sinks: OS command execution, command plus environment ---
    (("sink", "cwe78"), (0, 1), "none", [
        "java.lang.Runtime.exec(String,String[])",
        "java.lang.Runtime.exec(String[],String[])",
        "java.lang.Runtime.exec(String,String[],File)",
        "java.lang.Runtime.exec(String[],String[],File)",
    ]),
    # --- sinks: markup written to HTTP responses ---
    (("sink", "cwe79"), (0,), "none", [
        "java.io.PrintWriter.print(String)",
        "java.io.PrintWriter.println(String)",
        "java.io.PrintWriter.write(String)",
        "java.io.PrintWriter.write(String,int,int)",
        "java.io.PrintWriter.append(CharSequence)",
        "javax.servlet.jsp.JspWriter.print(String)",
        "javax.servlet.jsp.JspWriter.println(String)",
        "javax.servlet.jsp.JspWriter.write(String)",
        "javax.servlet.ServletOutputStream.print(String)",
        "javax.servlet.ServletOutputStream.println(String)",
        "jakarta.servlet.ServletOutputStream.print(String)",
        "jakarta.servlet.ServletOutputStream.println(String)",
        "jakarta.servlet.jsp.JspWriter.print(String)",
    ]),
    (("sink", "cwe79"), (0, 1), "none", [
        "java.io.PrintWriter.printf(String,Object[])",
        "java.io.PrintWriter.format(String,Object[])",
    ]),
    # --- sinks: redirect targets ---
    (("sink", "cwe601"), (0,), "none", [
        "javax.servlet.http.HttpServletResponse.sendRedirect(String)",
        "jakarta.servlet.http.HttpServletResponse.sendRedirect(String)",
        "javax.ws.rs.core.Response.temporaryRedirect(URI)",
        "javax.ws.rs.core.Response.seeOther(URI)",
        "org.springframework.web.servlet.view.RedirectView.setUrl(String)",
    ]),
    # --- sinks: response header values (Location and friends) ---
    (("sink", "cwe601"), (1,), "none", [
        "javax.servlet.http.HttpServletResponse.setHeader(String,String)",
        "javax.servlet.http.HttpServletResponse.addHeader(String,String)",
        "jakarta.servlet.http.HttpServletResponse.setHeader(String,String)",
        "jakarta.servlet.http.HttpServletResponse.addHeader(String,String)",
    ]),
    # --- sinks: management/registry operations reachable pre-authentication ---
    (("sink", "cwe306"), (0, 1), "none", [
        "javax.naming.InitialContext.bind(String,Object)",
        "javax.naming.InitialContext.rebind(String,Object)",
        "java.security.KeyStore.setKeyEntry(String,Key,char[],Certificate[])",
    ]),
    (("sink", "cwe306", "cwe862"), (1, 2), "none", [
        "javax.management.MBeanServer.invoke(ObjectName,String,Object[],String[])",
    ]),
    # --- sinks: resource mutations that assume an authorization check ---
    (("sink", "cwe862"), (0,), "none", [
        "java.nio.file.Files.delete(Path)",
        "java.nio.file.Files.deleteIfExists(Path)",
        "java.io.File.renameTo(File)",
    ]),
    (("sink", "cwe862"), (0, 1), "none", [
        "java.nio.file.Files.write(Path,byte[])",
        "java.nio.file.Files.move(Path,Path,CopyOption[])",
        "java.nio.file.Files.copy(Path,Path,CopyOption[])",
    ]),
    # --- sinks: dynamic dispatch that bypasses declared access rules ---
    (("sink", "cwe863"), (0, 1), "none", [
        "java.lang.reflect.Method.invoke(Object,Object[])",
    ]),
    (("sink", "cwe863"), (0,), "none", [
        "java.net.URLClassLoader.newInstance(URL[])",
        "java.lang.Class.forName(String)",
    ]),
    # --- sanitizers: SQL encoding / parameter binding ---
    (("sanitizer", "cwe89"), (1,), "return", [
        "org.owasp.esapi.Encoder.encodeForSQL(Codec,String)",
    ]),
    (("sanitizer", "cwe89"), (0,), "return", [
        "org.apache.commons.lang.StringEscapeUtils.escapeSql(String)",
    ]),
    (("sanitizer", "cwe89"), (1,), "none", [
        "java.sql.PreparedStatement.setString(int,String)",
        "java.sql.PreparedStatement.setObject(int,Object)",
        "java.sql.PreparedStatement.setBytes(int,byte[])",
    ]),
    # --- sanitizers: HTML/JS/CSS encoding ---
    (("sanitizer", "cwe79"), (0,), "return", [
        "org.owasp.esapi.Encoder.encodeForHTML(String)",
        "org.owasp.esapi.Encoder.encodeForHTMLAttribute(String)",
        "org.owasp.esapi.Encoder.encodeForJavaScript(String)",
        "org.owasp.esapi.Encoder.encodeForCSS(String)",
        "org.owasp.esapi.Encoder.encodeForXML(String)",
        "org.owasp.esapi.Encoder.encodeForXMLAttribute(String)",
        "org.owasp.encoder.Encode.forHtml(String)",
        "org.owasp.encoder.Encode.forHtmlAttribute(String)",
        "org.owasp.encoder.Encode.forJavaScript(String)",
        "org.owasp.encoder.Encode.forCssString(String)",
        "org.owasp.encoder.Encode.forXml(String)",
        "org.apache.commons.text.StringEscapeUtils.escapeHtml4(String)",
        "org.apache.commons.text.StringEscapeUtils.escapeEcmaScript(String)",
        "org.apache.commons.text.StringEscapeUtils.escapeXml11(String)",
        "org.apache.commons.text.StringEscapeUtils.escapeXml10(String)",
        "com.google.common.escape.Escaper.escape(String)",
    ]),
    (("sanitizer", "cwe79"), (0,), "return", [
        "org.jsoup.Jsoup.clean(String,Whitelist)",
    ]),
    # --- sanitizers: URL encoding / validation for redirects ---
    (("sanitizer", "cwe601"), (0,), "return", [
        "java.net.URLEncoder.encode(String,String)",
        "org.owasp.esapi.Encoder.encodeForURL(String)",
        "org.owasp.encoder.Encode.forUriComponent(String)",
        "org.springframework.web.util.UriUtils.encode(String,String)",
    ]),
    (("sanitizer", "cwe601"), (0,), "none", [
        "org.apache.commons.validator.routines.UrlValidator.isValid(String)",
    ]),
    # --- sanitizers: shell argument quoting ---
    (("sanitizer", "cwe78"), (1,), "return", [
        "org.owasp.esapi.Encoder.encodeForOS(Codec,String)",
    ]),
    (("sanitizer", "cwe78"), (0,), "return", [
        "org.apache.commons.exec.util.StringUtils.quoteArgument(String)",
    ]),
    # --- sanitizers: authentication guards ---
    (("sanitizer", "cwe306"), (), "none", [
        "javax.servlet.http.HttpServletRequest.authenticate(HttpServletResponse)",
        "javax.security.auth.login.LoginContext.login()",
    ]),
    (("sanitizer", "cwe306"), (0,), "return", [
        "org.springframework.security.authentication.AuthenticationManager.authenticate(Authentication)",
    ]),
    (("sanitizer", "cwe306"), (0,), "none", [
        "org.apache.shiro.subject.Subject.login(AuthenticationToken)",
    ]),
    # --- sanitizers: authorization guards ---
    (("sanitizer", "cwe862", "cwe863"), (0,), "none", [
        "javax.servlet.http.HttpServletRequest.isUserInRole(String)",
        "jakarta.servlet.http.HttpServletRequest.isUserInRole(String)",
        "javax.ejb.SessionContext.isCallerInRole(String)",
    ]),
    (("sanitizer", "cwe863"), (0,), "none", [
        "java.lang.SecurityManager.checkPermission(Permission)",
        "java.security.AccessController.checkPermission(Permission)",
        "org.apache.shiro.subject.Subject.checkPermission(String)",
        "org.apache.shiro.subject.Subject.isPermitted(String)",
    ]),
    (("sanitizer", "cwe862"), (0,), "none", [
        "java.lang.SecurityManager.checkRead(String)",
        "java.lang.SecurityManager.checkWrite(String)",
        "org.apache.shiro.subject.Subject.hasRole(String)",
    ]),
    # --- sanitizers: general input validation / canonicalisation ---
    (("sanitizer",), (1,), "return", [
        "org.owasp.esapi.Validator.getValidInput(String,String,String,int,boolean)",
    ]),
    (("sanitizer",), (0,), "return", [
        "java.lang.Integer.parseInt(String)",
        "java.lang.Long.parseLong(String)",
        "java.lang.Double.parseDouble(String)",
        "java.util.UUID.fromString(String)",
        "org.owasp.esapi.Encoder.canonicalize(String)",
        "org.owasp.esapi.Encoder.encodeForLDAP(String)",
    ]),
    (("sanitizer",), (0,), "none", [
        "org.apache.commons.validator.routines.EmailValidator.isValid(String)",
    ]),
    # --- plain library methods with no security role ---
    ((), (), "none", [
        "java.lang.String.trim()",
        "java.lang.String.strip()",
        "java.lang.String.toLowerCase()",
        "java.lang.String.toUpperCase()",
        "java.lang.String.length()",
        "java.lang.String.isEmpty()",
        "java.lang.String.isBlank()",
        "java.lang.String.charAt(int)",
        "java.lang.String.indexOf(String)",
        "java.lang.String.substring(int)",
        "java.lang.String.substring(int,int)",
        "java.lang.String.concat(String)",
        "java.lang.String.startsWith(String)",
        "java.lang.String.endsWith(String)",
        "java.lang.String.equalsIgnoreCase(String)",
        "java.lang.String.split(String)",
        "java.lang.String.valueOf(int)",
        "java.lang.String.format(String,Object[])",
        "java.lang.String.replace(CharSequence,CharSequence)",
        "java.lang.String.compareTo(String)",
        "java.lang.Math.max(int,int)",
        "java.lang.Math.min(int,int)",
        "java.lang.Math.abs(int)",
        "java.lang.Math.floor(double)",
        "java.lang.Math.ceil(double)",
        "java.lang.Math.sqrt(double)",
        "java.lang.Math.pow(double,double)",
        "java.lang.Math.round(double)",
        "java.util.List.size()",
        "java.util.List.get(int)",
        "java.util.List.isEmpty()",
        "java.util.List.contains(Object)",
        "java.util.List.indexOf(Object)",
        "java.util.Map.get(Object)",
        "java.util.Map.containsKey(Object)",
        "java.util.Map.keySet()",
        "java.util.Map.size()",
        "java.util.Set.size()",
        "java.util.Set.contains(Object)",
        "java.util.Collection.iterator()",
        "java.util.Collections.sort(List)",
        "java.util.Collections.unmodifiableList(List)",
        "java.util.Collections.emptyList()",
        "java.util.Collections.singletonList(Object)",
        "java.util.Arrays.asList(Object[])",
        "java.util.Arrays.sort(int[])",
        "java.util.Arrays.copyOf(int[],int)",
        "java.util.Arrays.stream(int[])",
        "java.util.Objects.equals(Object,Object)",
        "java.util.Objects.hash(Object[])",
        "java.util.Objects.requireNonNull(Object)",
        "java.util.Objects.toString(Object)",
        "java.util.Objects.isNull(Object)",
        "org.slf4j.Logger.info(String)",
        "org.slf4j.Logger.debug(String)",
        "org.slf4j.Logger.warn(String)",
        "org.slf4j.Logger.error(String)",
        "org.slf4j.Logger.trace(String)",
        "org.slf4j.LoggerFactory.getLogger(Class)",
        "java.lang.StringBuilder.append(String)",
        "java.lang.StringBuilder.append(int)",
        "java.lang.StringBuilder.toString()",
        "java.lang.StringBuilder.reverse()",
        "java.lang.StringBuilder.insert(int,String)",
        "java.lang.StringBuilder.setLength(int)",
        "java.lang.System.currentTimeMillis()",
        "java.lang.System.nanoTime()",
        "java.lang.System.lineSeparator()",
        "java.lang.System.identityHashCode(Object)",
        "java.lang.Thread.sleep(long)",
        "java.lang.Thread.currentThread()",
        "java.util.UUID.randomUUID()",
        "java.time.LocalDate.now()",
        "java.time.LocalDateTime.now()",
        "java.time.Instant.now()",
        "java.time.Duration.ofSeconds(long)",
        "java.util.Optional.ofNullable(Object)",
        "java.util.Optional.empty()",
        "java.util.Optional.orElse(Object)",
        "java.lang.Integer.valueOf(int)",
        "java.lang.Integer.toString(int)",
        "java.lang.Integer.compare(int,int)",
        "java.lang.Boolean.parseBoolean(String)",
        "java.lang.Character.isDigit(char)",
        "java.lang.Character.isLetter(char)",
        "java.nio.file.Paths.get(String,String[])",
        "java.nio.file.Files.exists(Path,LinkOption[])",
        "java.nio.file.Files.size(Path)",
        "java.nio.file.Files.isDirectory(Path,LinkOption[])",
        "java.util.regex.Pattern.compile(String)",
        "java.util.regex.Matcher.matches()",
        "java.util.regex.Matcher.group(int)",
        "java.util.stream.Stream.filter(Predicate)",
        "java.util.stream.Stream.map(Function)",
        "java.util.stream.Stream.collect(Collector)",
        "java.util.stream.Collectors.toList()",
        "com.google.common.base.Strings.nullToEmpty(String)",
        "com.google.common.base.Strings.isNullOrEmpty(String)",
        "com.google.common.base.Joiner.join(Iterable)",
        "com.google.common.collect.ImmutableList.copyOf(Collection)",
        "org.apache.commons.lang3.StringUtils.isBlank(CharSequence)",
        "org.apache.commons.lang3.StringUtils.isEmpty(CharSequence)",
        "org.apache.commons.lang3.StringUtils.capitalize(String)",
        "org.apache.commons.lang3.StringUtils.join(Object[],String)",
        "org.apache.commons.lang3.ObjectUtils.firstNonNull(Object[])",
    ]),
]

NOTES = {
    "javax.servlet.http.HttpServletRequest.getParameter(String)": "canonical request-parameter read",
    "org.owasp.esapi.Encoder.encodeForSQL(Codec,String)": "encodes the second argument for the given SQL codec",
    "java.sql.Statement.executeQuery(String)": "executes the literal SQL in the first argument",
}


def build() -> Dataset:
    records = []
    seen: set[str] = set()
    for labels, data_in, data_out, signatures in GROUPS:
        label_set = LabelSet.from_names(labels)
        for signature in signatures:
            if signature in seen:
                raise SystemExit(f"duplicate signature in tables: {signature}")
            seen.add(signature)
            records.append(
                MethodRecord(
                    signature=signature,
                    labels=label_set,
                    data_in=data_in,
                    data_out=data_out,
                    discovery="training",
                    note=NOTES.get(signature),
                )
            )
    return Dataset(records=tuple(records))


def main() -> None:
    dataset = build()
    schema = default_schema()
    tokens = default_token_table()
    for record in dataset.records:
        features_from_signature(record.signature, schema, tokens)

    required = [
        "javax.servlet.http.HttpServletRequest.getParameter(String)",
        "org.owasp.esapi.Encoder.encodeForSQL(Codec,String)",
        "java.sql.Statement.executeQuery(String)",
    ]
    for signature in required:
        if dataset.by_signature(signature) is None:
            raise SystemExit(f"required record missing: {signature}")

    problems = [p for p in validate_dataset(dataset) if not p.startswith("warning:")]
    if problems:
        raise SystemExit("validation errors:\n" + "\n".join(problems))
    if len(dataset.records) < 300:
        raise SystemExit(f"corpus too small: {len(dataset.records)} records")

    OUT_PATH.write_text(save_dataset(dataset), encoding="utf-8")
    by_label: dict[str, int] = {}
    for record in dataset.records:
        for name in record.labels.names():
            by_label[name] = by_label.get(name, 0) + 1
    print(f"wrote {len(dataset.records)} records to {OUT_PATH}")
    print("label counts:", dict(sorted(by_label.items())))


if __name__ == "__main__":
    main()
