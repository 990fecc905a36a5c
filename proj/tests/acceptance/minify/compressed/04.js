function c(c){const e={},n="?"===c.charAt(0)?c.slice(1):c;return n?(n.split("&").forEach(c=>{const[n,o=""]=c.split("="),t=decodeURIComponent(n.replace(/\+/g," ")),p=decodeURIComponent(o.replace(/\+/g," "));e[t]=t in e?[].concat(e[t],p):p}),e):e}
